#include "seqrad/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace seqrad {

namespace {

constexpr double kPivotEps = 1e-12;

/// Dense tableau over columns [nu_0..nu_{Z-1}, t, s_0..s_{P-1}, artificial].
/// Rows: per pair  -<c_p, nu> + t + s_p = 0  (slack s_p basic, degenerate)
/// and the mass row  sum nu + artificial = 1.
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;    // rows x cols
    std::vector<double> rhs;  // rows
    std::vector<double> obj;  // reduced-cost row for the current phase
    double obj_value = 0.0;
    std::vector<std::size_t> basis;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c < cols; ++c) at(pr, c) *= inv;
        rhs[pr] *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
            rhs[r] -= f * rhs[pr];
        }
        const double f = obj[pc];
        if (f != 0.0) {
            for (std::size_t c = 0; c < cols; ++c) obj[c] -= f * at(pr, c);
            obj[pc] = 0.0;
            obj_value -= f * rhs[pr];
        }
        basis[pr] = pc;
    }

    /// Install minimization costs and reduce them against the current basis.
    void set_objective(const std::vector<double>& costs) {
        obj = costs;
        obj_value = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double f = obj[basis[r]];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) obj[c] -= f * at(r, c);
            obj[basis[r]] = 0.0;
            obj_value -= f * rhs[r];
        }
    }

    /// Bland's rule: entering column is the lowest index with a negative
    /// reduced cost; leaving row has the lowest basic index among ratio ties.
    void run(const std::vector<bool>& allowed) {
        while (true) {
            std::size_t enter = cols;
            for (std::size_t c = 0; c < cols; ++c) {
                if (allowed[c] && obj[c] < -kPivotEps) {
                    enter = c;
                    break;
                }
            }
            if (enter == cols) return;
            std::size_t leave = rows;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows; ++r) {
                if (at(r, enter) <= kPivotEps) continue;
                const double ratio = rhs[r] / at(r, enter);
                if (ratio < best_ratio - kPivotEps ||
                    (ratio < best_ratio + kPivotEps &&
                     (leave == rows || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == rows) throw Error("linear program is unbounded; costs were malformed");
            pivot(leave, enter);
        }
    }
};

double phi(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double emax_integrand(double x, std::size_t m) {
    return static_cast<double>(m) * x * phi(x) * std::pow(normal_cdf(x), m - 1);
}

double adaptive_simpson(double lo, double hi, double flo, double fmid, double fhi, double whole,
                        double tol, std::size_t m, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flm = emax_integrand(lmid, m);
    const double frm = emax_integrand(rmid, m);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(lo, mid, flo, flm, fmid, left, tol / 2.0, m, depth - 1) +
           adaptive_simpson(mid, hi, fmid, frm, fhi, right, tol / 2.0, m, depth - 1);
}

}  // namespace

LPResult simplex_lp(const std::vector<std::vector<double>>& pair_costs) {
    if (pair_costs.empty()) throw MalformedSpec("the program needs at least one pair row");
    const std::size_t pairs = pair_costs.size();
    const std::size_t z = pair_costs.front().size();
    if (z == 0) throw MalformedSpec("pair rows must be nonempty");
    for (const auto& row : pair_costs) {
        if (row.size() != z) throw MalformedSpec("pair rows must all have the same length");
        for (double v : row) {
            if (!std::isfinite(v) || v < 0.0) {
                throw MalformedSpec("pair costs must be finite and nonnegative");
            }
        }
    }

    const std::size_t col_t = z;
    const std::size_t col_slack = z + 1;
    const std::size_t col_art = z + 1 + pairs;
    Tableau tab;
    tab.rows = pairs + 1;
    tab.cols = z + 1 + pairs + 1;
    tab.a.assign(tab.rows * tab.cols, 0.0);
    tab.rhs.assign(tab.rows, 0.0);
    tab.basis.assign(tab.rows, 0);
    for (std::size_t p = 0; p < pairs; ++p) {
        for (std::size_t j = 0; j < z; ++j) tab.at(p, j) = -pair_costs[p][j];
        tab.at(p, col_t) = 1.0;
        tab.at(p, col_slack + p) = 1.0;
        tab.basis[p] = col_slack + p;
    }
    for (std::size_t j = 0; j < z; ++j) tab.at(pairs, j) = 1.0;
    tab.at(pairs, col_art) = 1.0;
    tab.rhs[pairs] = 1.0;
    tab.basis[pairs] = col_art;

    std::vector<bool> allowed(tab.cols, true);
    std::vector<double> costs(tab.cols, 0.0);

    costs[col_art] = 1.0;  // phase 1: drive the artificial out
    tab.set_objective(costs);
    tab.run(allowed);
    if (tab.obj_value < -1e-9) throw Error("simplex phase 1 failed; the simplex row is always feasible");

    allowed[col_art] = false;
    costs.assign(tab.cols, 0.0);
    costs[col_t] = -1.0;  // phase 2: maximize t
    tab.set_objective(costs);
    tab.run(allowed);

    std::vector<double> solution(tab.cols, 0.0);
    for (std::size_t r = 0; r < tab.rows; ++r) solution[tab.basis[r]] = tab.rhs[r];

    LPResult out;
    out.t_star = solution[col_t];
    std::vector<double> nu(solution.begin(), solution.begin() + static_cast<std::ptrdiff_t>(z));
    for (double& w : nu) w = std::max(0.0, w);
    out.nu_star = Measure::from_weights(std::move(nu));

    for (std::size_t p = 0; p < pairs; ++p) {
        double dot = 0.0;
        for (std::size_t j = 0; j < z; ++j) dot += pair_costs[p][j] * out.nu_star.weights[j];
        if (dot < out.t_star - 1e-9) throw Error("simplex optimum violates its own constraints");
    }
    return out;
}

SeparationResult separation_value(const FunctionClass& fc) {
    if (fc.m() < 2) throw NeedTwoFunctions("the separation program needs at least two functions");
    std::vector<std::vector<double>> costs;
    costs.reserve(fc.m() * (fc.m() - 1) / 2);
    for (std::size_t i = 0; i < fc.m(); ++i) {
        for (std::size_t j = i + 1; j < fc.m(); ++j) {
            std::vector<double> row(fc.z_count());
            for (std::size_t p = 0; p < fc.z_count(); ++p) {
                const double d = fc.value(i, p) - fc.value(j, p);
                row[p] = d * d;
            }
            costs.push_back(std::move(row));
        }
    }
    LPResult lp = simplex_lp(costs);
    SeparationResult out;
    out.a = std::sqrt(std::max(0.0, lp.t_star));
    out.nu_star = std::move(lp.nu_star);
    return out;
}

double heat_upper_bound(std::size_t m, double b) {
    if (m == 0) throw MalformedSpec("dimension must be positive");
    if (b < 0.0) throw MalformedSpec("coordinate bound must be nonnegative");
    if (m == 1 || b == 0.0) return 0.0;  // a single centered coordinate has mean 0
    constexpr double kLim = 13.0;
    const double flo = emax_integrand(-kLim, m);
    const double fhi = emax_integrand(kLim, m);
    const double fmid = emax_integrand(0.0, m);
    const double whole = 2.0 * kLim / 6.0 * (flo + 4.0 * fmid + fhi);
    return b * adaptive_simpson(-kLim, kLim, flo, fmid, fhi, whole, 1e-11, m, 40);
}

const char* const kHeatReferenceNote =
    "The independent-coordinate heat value is reported for reference but not "
    "enforced as an upper bound: coordinates of the limit process share one "
    "driving noise, and for anti-correlated payoff sets (already {(1,-1)}) the "
    "measured complexity exceeds the independent-coordinate value.";

SandwichReport sandwich_check(const FunctionClass& fc, double estimate, double tolerance) {
    if (fc.m() < 2) throw NeedTwoFunctions("the sandwich bounds need at least two functions");
    SeparationResult sep = separation_value(fc);
    const double b = fc.bound();
    const double root_log_m = std::sqrt(std::log(static_cast<double>(fc.m())));

    SandwichReport rep;
    rep.a_value = sep.a;
    rep.lower = sep.a * root_log_m / 17.0;
    rep.upper_logm = std::numbers::sqrt2 * b * root_log_m;
    rep.upper_heat = heat_upper_bound(fc.m(), b);
    rep.heat_bound_enforced = false;
    rep.argmax_measure = std::move(sep.nu_star);
    rep.tolerance = tolerance;
    rep.note = kHeatReferenceNote;
    if (rep.lower > rep.upper_logm + 1e-12) {
        throw Error("lower bound exceeds the log-m upper bound; the program is inconsistent");
    }
    rep.pass = rep.lower - tolerance <= estimate && estimate <= rep.upper_logm + tolerance;
    return rep;
}

}  // namespace seqrad
