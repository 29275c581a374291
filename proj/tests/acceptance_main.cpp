// Acceptance gate: ten numbered end-to-end checks, one line per criterion.
// Exit code 0 only when every criterion passes. Tolerances are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seqrad/bounds.hpp"
#include "seqrad/class_io.hpp"
#include "seqrad/control.hpp"
#include "seqrad/exact_dp.hpp"
#include "seqrad/gaussian_iid.hpp"
#include "seqrad/gheat.hpp"
#include "seqrad/report.hpp"

#include "oracles.hpp"

using namespace seqrad;

namespace {

bool g_all_pass = true;

void line(int k, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) g_all_pass = false;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

const double kLimitTwoPoint = std::sqrt(2.0 / std::numbers::pi);

GammaSet two_point() { return GammaSet(2, {{1.0, -1.0}}); }

/// Random rational payoff set on the quarter grid; duplicates merge.
GammaSet random_gamma(test_oracles::Gen& gen, std::size_t max_m, std::size_t max_count) {
    const std::size_t m = static_cast<std::size_t>(gen.uniform_int(1, static_cast<int>(max_m)));
    const std::size_t count =
        static_cast<std::size_t>(gen.uniform_int(1, static_cast<int>(max_count)));
    std::vector<std::vector<double>> vecs(count, std::vector<double>(m));
    for (auto& v : vecs)
        for (auto& e : v) e = gen.quarter(1);
    return GammaSet(m, vecs);
}

/// Value of the n-round game started at state x, built from the exposed
/// one-step recursion alone; equals dp_value at the origin.
double w_value(const GammaSet& gamma, int n, int depth, std::span<const double> x) {
    if (depth == n) return max_coordinate(x);
    return backward_step(
               [&](std::span<const double> y) { return w_value(gamma, n, depth + 1, y); }, x,
               gamma, n)
        .first;
}

/// Simplex grid-search oracle for the separation program, |Z| <= 3: coarse
/// barycentric scan plus halving zooms around the incumbent. The objective is
/// concave, so the single basin keeps every zoom window around the optimum.
double grid_separation_oracle(const FunctionClass& fc) {
    const std::size_t m = fc.m();
    const std::size_t z = fc.z_count();
    std::vector<std::vector<double>> costs;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = i + 1; k < m; ++k) {
            std::vector<double> row(z);
            for (std::size_t j = 0; j < z; ++j) {
                const double d = fc.value(i, j) - fc.value(k, j);
                row[j] = d * d;
            }
            costs.push_back(std::move(row));
        }
    }
    auto eval = [&](const std::vector<double>& nu) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& c : costs) {
            double s = 0.0;
            for (std::size_t j = 0; j < z; ++j) s += c[j] * nu[j];
            worst = std::min(worst, s);
        }
        return worst;
    };

    if (z == 1) return eval({1.0});
    if (z == 2) {
        double best = -std::numeric_limits<double>::infinity(), at = 0.5;
        auto scan = [&](double lo, double hi, int pts) {
            for (int i = 0; i <= pts; ++i) {
                const double s = lo + (hi - lo) * i / pts;
                if (s < 0.0 || s > 1.0) continue;
                const double v = eval({s, 1.0 - s});
                if (v > best) {
                    best = v;
                    at = s;
                }
            }
        };
        scan(0.0, 1.0, 400);
        double w = 1.0 / 400;
        for (int round = 0; round < 18; ++round) {
            scan(at - w, at + w, 40);
            w *= 0.5;
        }
        return best;
    }

    double best = -std::numeric_limits<double>::infinity();
    double b1 = 1.0 / 3, b2 = 1.0 / 3;
    auto probe = [&](double s1, double s2) {
        if (s1 < 0.0 || s2 < 0.0 || s1 + s2 > 1.0) return;
        const double v = eval({s1, s2, 1.0 - s1 - s2});
        if (v > best) {
            best = v;
            b1 = s1;
            b2 = s2;
        }
    };
    const int coarse = 200;
    for (int i = 0; i <= coarse; ++i)
        for (int j = 0; i + j <= coarse; ++j)
            probe(i / static_cast<double>(coarse), j / static_cast<double>(coarse));
    double w = 1.0 / coarse;
    for (int round = 0; round < 18; ++round) {
        const double c1 = b1, c2 = b2;
        const int pts = 24;
        for (int i = -pts; i <= pts; ++i)
            for (int j = -pts; j <= pts; ++j) probe(c1 + w * i / pts, c2 + w * j / pts);
        w *= 0.5;
    }
    return best;
}

/// Mean and standard error of the max of m iid standard normals.
std::pair<double, double> mc_max_iid(std::size_t m, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, normal(engine));
        sum += mx;
        sumsq += mx * mx;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = (sumsq - sum * mean) / static_cast<double>(samples - 1);
    return {mean, std::sqrt(var / static_cast<double>(samples))};
}

std::vector<std::size_t> interior_nodes(const Grid& grid, double reach) {
    std::vector<std::size_t> nodes;
    std::vector<std::size_t> multi(grid.m);
    for (std::size_t node = 0; node < grid.total_nodes; ++node) {
        grid.unflatten(node, multi);
        bool inside = true;
        for (std::size_t a = 0; a < grid.m; ++a) {
            if (std::abs(grid.coord(multi[a])) + reach > grid.extent() - 1e-12) inside = false;
        }
        if (inside) nodes.push_back(node);
    }
    return nodes;
}

void criterion_1() {
    Timer timer;
    const auto grid = build_grid(2, two_point(), 0.02, 0.004, 6.0);
    const auto result = solve_gheat(two_point(), grid);
    const double secs = timer.seconds();
    const double err = std::abs(result.value_at_origin - kLimitTwoPoint);
    line(1, err <= 5e-3 && secs < 30.0,
         "two-point limit solve: |" + fmt(result.value_at_origin) + " - " + fmt(kLimitTwoPoint) +
             "| = " + fmt(err) + " (tol 5e-3), " + fmt(secs) + " s (< 30)");
}

void criterion_2() {
    std::vector<int> schedule;
    for (int n = 1; n <= 1024; n *= 2) schedule.push_back(n);
    const auto rows = convergence_table(two_point(), schedule);
    const double v1024 = rows.back().value;
    const double err = std::abs(v1024 - kLimitTwoPoint);
    bool shrinking = true;
    double prev_mag = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.n < 16 || row.skipped || !row.delta) continue;
        const double mag = std::abs(*row.delta);
        if (mag > prev_mag + 1e-15) shrinking = false;
        prev_mag = mag;
    }
    line(2, err <= 0.02 && shrinking,
         "exact recursion at n=1024: |" + fmt(v1024) + " - " + fmt(kLimitTwoPoint) + "| = " +
             fmt(err) + " (tol 0.02), deltas " + (shrinking ? "shrink" : "do not shrink") +
             " for n >= 16");
}

void criterion_3() {
    const GammaSet gamma(3, {{2.0, 0.0, 1.0}});
    const double expected = 2.0 / std::sqrt(2.0 * std::numbers::pi);
    const auto grid = build_grid(3, gamma, 0.2, 0.04, 8.0);
    const auto solved = solve_gheat(gamma, grid);
    const double pde_err = std::abs(solved.value_at_origin - expected);

    const auto est = simulate_policy(gamma, Policy::constant(0), 256, 100000, 42);
    const double sim_err = std::abs(est.mean - expected);
    line(3, pde_err <= 1e-2 && sim_err <= 4.0 * est.std_err,
         "single payoff (2,0,1): solver err " + fmt(pde_err) + " (tol 1e-2), simulated err " +
             fmt(sim_err) + " vs 4*stderr " + fmt(4.0 * est.std_err));
}

void criterion_4() {
    Timer timer;
    test_oracles::Gen gen(101);
    int bad = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const GammaSet gamma = random_gamma(gen, 3, 3);
        const int n = gen.uniform_int(1, 3);
        const double dp = dp_value(gamma, DPConfig{.n = n});
        const double brute = brute_force_value(gamma, n);
        const double diff = std::abs(dp - brute);
        worst = std::max(worst, diff);
        if (diff > 1e-12) ++bad;
    }
    const double secs = timer.seconds();
    line(4, bad == 0 && secs < 60.0,
         "recursion vs exhaustive tree on 50 random classes: worst |diff| = " + fmt(worst) +
             " (tol 1e-12), " + fmt(secs) + " s (< 60)");
}

void criterion_5() {
    double worst = 0.0;
    for (int n : {4, 8, 16}) {
        const double dt = 1.0 / n;
        const double h = std::sqrt(dt);
        const auto grid = build_grid(2, two_point(), h, dt, 6.0);
        const auto solved = solve_gheat(two_point(), grid);
        const double dp = dp_value(two_point(), DPConfig{.n = n});
        worst = std::max(worst, std::abs(solved.value_at_origin - dp));
    }
    line(5, worst <= 1e-10,
         "grid-exact solves equal the exact recursion at n in {4,8,16}: worst |diff| = " +
             fmt(worst) + " (tol 1e-10)");
}

struct BatchClass {
    FunctionClass fc;
    double pde = 0.0;
};

std::vector<BatchClass> iid_batch() {
    std::vector<BatchClass> batch;
    test_oracles::Gen gen(102);
    while (batch.size() < 25) {
        const std::size_t m = static_cast<std::size_t>(gen.uniform_int(2, 3));
        const std::size_t z = static_cast<std::size_t>(gen.uniform_int(1, 4));
        std::vector<std::vector<double>> rows(m, std::vector<double>(z));
        for (auto& row : rows)
            for (auto& v : row) v = gen.quarter(1);
        BatchClass entry{FunctionClass::from_rows(rows)};
        const GammaSet gamma = gamma_of(entry.fc);
        const double h = m == 2 ? 0.1 : 0.2;
        const auto grid = build_grid(m, gamma, h, h / 5.0, 4.0);
        entry.pde = solve_gheat(gamma, grid).value_at_origin;
        batch.push_back(std::move(entry));
    }
    return batch;
}

void criterion_6(const std::vector<BatchClass>& batch) {
    int bad = 0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (const auto& entry : batch) {
        std::vector<Measure> measures{Measure::uniform(entry.fc.z_count())};
        measures.push_back(separation_value(entry.fc).nu_star);
        for (const auto& nu : measures) {
            const IidResult r = iid_asymptotic(entry.fc, nu, 100000, 42);
            const double gap = r.mc.mean - (entry.pde + 4.0 * r.mc.std_err + 1e-2);
            worst_gap = std::max(worst_gap, gap);
            if (gap > 0.0) ++bad;
        }
    }
    line(6, bad == 0,
         "iid value below the solver value on 25 classes x 2 measures: worst margin " +
             fmt(-worst_gap) + " (slack 4*stderr + 1e-2), violations " + std::to_string(bad));
}

void criterion_7(const std::vector<BatchClass>& batch) {
    int bad = 0;
    double worst_lp = 0.0;
    for (const auto& entry : batch) {
        const std::size_t m = entry.fc.m();
        const double root_log_m = std::sqrt(std::log(static_cast<double>(m)));
        const SeparationResult sep = separation_value(entry.fc);
        const double lower = sep.a * root_log_m / 17.0;
        const double upper = std::numbers::sqrt2 * entry.fc.bound() * root_log_m;
        if (lower > entry.pde + 1e-2) ++bad;
        if (entry.pde > upper + 1e-2) ++bad;
        if (entry.fc.z_count() <= 3) {
            const double oracle_a = std::sqrt(grid_separation_oracle(entry.fc));
            worst_lp = std::max(worst_lp, std::abs(sep.a - oracle_a));
            if (std::abs(sep.a - oracle_a) > 1e-3) ++bad;
        }
    }
    line(7, bad == 0,
         "sandwich bounds hold on the 25 classes (slack 1e-2); separation program vs grid "
         "search worst |diff| = " +
             fmt(worst_lp) + " (tol 1e-3), violations " + std::to_string(bad));
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    double prev = 0.0;
    for (std::size_t m = 2; m <= 64; ++m) {
        const double v = heat_upper_bound(m, 1.0);
        if (v > std::sqrt(2.0 * std::log(static_cast<double>(m))) + 1e-12) ok = false;
        if (v < prev - 1e-12) ok = false;
        prev = v;
    }
    const double q2 = heat_upper_bound(2, 1.0);
    const double q3 = heat_upper_bound(3, 1.0);
    const double c2 = 1.0 / std::sqrt(std::numbers::pi);
    const double c3 = 1.5 / std::sqrt(std::numbers::pi);
    if (std::abs(q2 - c2) > 1e-8 || std::abs(q3 - c3) > 1e-8) ok = false;

    const auto [m2, se2] = mc_max_iid(2, 10'000'000, 8008);
    const auto [m3, se3] = mc_max_iid(3, 10'000'000, 8009);
    const double z2 = std::abs(q2 - m2) / se2;
    const double z3 = std::abs(q3 - m3) / se3;
    if (z2 > 4.0 || z3 > 4.0) ok = false;
    line(8, ok,
         "quadrature bound under sqrt(2 ln m) for m=2..64; anchors |" + fmt(q2) + " - " +
             fmt(c2) + "|, |" + fmt(q3) + " - " + fmt(c3) +
             "| <= 1e-8; MC oracle z-scores " + fmt(z2) + ", " + fmt(z3) + " (< 4) at 1e7");
}

void criterion_9() {
    std::vector<std::pair<std::string, std::size_t>> results;

    {  // One-step scheme monotonicity on convex-combination nodes.
        test_oracles::Gen gen(901);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const GammaSet gamma = random_gamma(gen, 3, 3);
            const auto grid = build_grid(gamma.m(), gamma, 0.5, 0.16, 2.0);
            const auto inside = interior_nodes(grid, gamma.bound() * std::sqrt(grid.dt));
            std::vector<double> lo(grid.total_nodes), hi(grid.total_nodes);
            for (std::size_t i = 0; i < lo.size(); ++i) {
                lo[i] = gen.uniform(-2, 2);
                hi[i] = lo[i] + gen.uniform(0, 1);
            }
            const auto slo = sl_step(grid, gamma, lo);
            const auto shi = sl_step(grid, gamma, hi);
            for (std::size_t node : inside)
                if (shi[node] < slo[node] - 1e-12) ++violations;
        }
        results.emplace_back("scheme monotonicity", violations);
    }

    {  // Recursion translation equivariance along the diagonal.
        test_oracles::Gen gen(902);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const GammaSet gamma = random_gamma(gen, 2, 2);
            const int n = gen.uniform_int(1, 3);
            std::vector<double> x(gamma.m()), shifted(gamma.m());
            const double c = gen.uniform(-1, 1);
            for (std::size_t a = 0; a < gamma.m(); ++a) {
                x[a] = gen.uniform(-1, 1);
                shifted[a] = x[a] + c;
            }
            const double base = w_value(gamma, n, 0, x);
            if (std::abs(w_value(gamma, n, 0, shifted) - (base + c)) > 1e-9) ++violations;
        }
        results.emplace_back("translation equivariance", violations);
    }

    {  // Recursion is 1-Lipschitz in the sup norm of the start state.
        test_oracles::Gen gen(903);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const GammaSet gamma = random_gamma(gen, 2, 2);
            const int n = gen.uniform_int(1, 3);
            std::vector<double> x(gamma.m()), y(gamma.m());
            double dist = 0.0;
            for (std::size_t a = 0; a < gamma.m(); ++a) {
                x[a] = gen.uniform(-1, 1);
                y[a] = gen.uniform(-1, 1);
                dist = std::max(dist, std::abs(x[a] - y[a]));
            }
            if (std::abs(w_value(gamma, n, 0, x) - w_value(gamma, n, 0, y)) > dist + 1e-9)
                ++violations;
        }
        results.emplace_back("sup-norm Lipschitz", violations);
    }

    {  // Positive homogeneity of the value in the payoff set.
        test_oracles::Gen gen(904);
        std::size_t violations = 0;
        const double factors[] = {0.5, 2.0, 3.0};
        for (int rep = 0; rep < 100; ++rep) {
            const GammaSet gamma = random_gamma(gen, 3, 3);
            const int n = gen.uniform_int(1, 3);
            const double c = factors[rep % 3];
            std::vector<std::vector<double>> scaled;
            for (std::size_t i = 0; i < gamma.size(); ++i) {
                const auto v = gamma.vec(i);
                std::vector<double> row(v.begin(), v.end());
                for (auto& e : row) e *= c;
                scaled.push_back(std::move(row));
            }
            const double base = dp_value(gamma, DPConfig{.n = n});
            const double after = dp_value(GammaSet(gamma.m(), scaled), DPConfig{.n = n});
            if (std::abs(after - c * base) > 1e-12) ++violations;
        }
        results.emplace_back("homogeneity", violations);
    }

    {  // Duplicating a coordinate function changes nothing.
        test_oracles::Gen gen(905);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const GammaSet gamma = random_gamma(gen, 2, 3);
            const int n = gen.uniform_int(1, 3);
            const std::size_t dup =
                static_cast<std::size_t>(gen.uniform_int(0, static_cast<int>(gamma.m()) - 1));
            std::vector<std::vector<double>> wide;
            for (std::size_t i = 0; i < gamma.size(); ++i) {
                const auto v = gamma.vec(i);
                std::vector<double> row(v.begin(), v.end());
                row.push_back(row[dup]);
                wide.push_back(std::move(row));
            }
            const double base = dp_value(gamma, DPConfig{.n = n});
            const double after = dp_value(GammaSet(gamma.m() + 1, wide), DPConfig{.n = n});
            if (std::abs(after - base) > 1e-12) ++violations;
        }
        results.emplace_back("duplicate-function invariance", violations);
    }

    {  // Adding a convex combination of payoffs changes nothing.
        test_oracles::Gen gen(906);
        std::size_t violations = 0;
        const double lambdas[] = {0.25, 0.5, 0.75};
        for (int rep = 0; rep < 100; ++rep) {
            GammaSet gamma = random_gamma(gen, 3, 3);
            while (gamma.size() < 2) gamma = random_gamma(gen, 3, 3);
            const int n = gen.uniform_int(1, 3);
            const double lambda = lambdas[rep % 3];
            const auto vi = gamma.vec(0);
            const auto vk = gamma.vec(gamma.size() - 1);
            std::vector<std::vector<double>> extended;
            for (std::size_t i = 0; i < gamma.size(); ++i) {
                const auto v = gamma.vec(i);
                extended.emplace_back(v.begin(), v.end());
            }
            std::vector<double> mix(gamma.m());
            for (std::size_t a = 0; a < gamma.m(); ++a)
                mix[a] = lambda * vi[a] + (1.0 - lambda) * vk[a];
            extended.push_back(std::move(mix));
            const double base = dp_value(gamma, DPConfig{.n = n});
            const double after = dp_value(GammaSet(gamma.m(), extended), DPConfig{.n = n});
            if (std::abs(after - base) > 1e-10) ++violations;
        }
        results.emplace_back("convex-combination invariance", violations);
    }

    {  // Monte Carlo runs are bitwise deterministic in (inputs, seed).
        test_oracles::Gen gen(907);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t m = static_cast<std::size_t>(gen.uniform_int(1, 3));
            SymMatrix sigma(m);
            std::vector<std::vector<double>> a(m, std::vector<double>(m));
            for (auto& row : a)
                for (auto& v : row) v = gen.uniform(-1, 1);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i; j < m; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < m; ++k) s += a[i][k] * a[j][k];
                    sigma.set(i, j, s);
                }
            const auto first = emax_gaussian_mc(sigma, 2000, static_cast<std::uint64_t>(rep));
            const auto again = emax_gaussian_mc(sigma, 2000, static_cast<std::uint64_t>(rep));
            const auto other = emax_gaussian_mc(sigma, 2000, static_cast<std::uint64_t>(rep) + 1);
            if (first.mean != again.mean || first.std_err != again.std_err) ++violations;
            if (first.mean == other.mean) ++violations;
        }
        results.emplace_back("MC determinism", violations);
    }

    {  // Doubling the Gaussian scale doubles the estimate exactly.
        test_oracles::Gen gen(908);
        std::size_t violations = 0;
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t m = static_cast<std::size_t>(gen.uniform_int(1, 3));
            SymMatrix sigma(m), scaled(m);
            std::vector<std::vector<double>> a(m, std::vector<double>(m));
            for (auto& row : a)
                for (auto& v : row) v = gen.uniform(-1, 1);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i; j < m; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < m; ++k) s += a[i][k] * a[j][k];
                    sigma.set(i, j, s);
                    scaled.set(i, j, 4.0 * s);
                }
            const auto base = emax_gaussian_mc(sigma, 2000, 7);
            const auto twice = emax_gaussian_mc(scaled, 2000, 7);
            const double tol = 1e-12 * std::max(1.0, std::abs(base.mean));
            if (std::abs(twice.mean - 2.0 * base.mean) > tol) ++violations;
            if (std::abs(twice.std_err - 2.0 * base.std_err) > tol) ++violations;
        }
        results.emplace_back("MC scale equivariance", violations);
    }

    std::size_t total = 0;
    std::string names;
    for (const auto& [name, v] : results) {
        total += v;
        if (v > 0) names += (names.empty() ? "" : ", ") + name + " (" + std::to_string(v) + ")";
    }
    line(9, total == 0,
         total == 0 ? "8 invariant suites x 100 random cases: zero violations"
                    : "invariant violations in: " + names);
}

void criterion_10() {
    // Both equations on the fine grid: the worst-case solve against the
    // independent-coordinate reference.
    const auto grid = build_grid(2, two_point(), 0.01, 0.002, 6.0);
    const double g_value = solve_gheat(two_point(), grid).value_at_origin;
    const double heat_value = solve_heat_reference(1.0, grid).value_at_origin;
    bool ok = true;
    // The adjudication fact: the measured complexity exceeds the reference, so
    // the reference must not be enforced as an upper bound.
    if (!(g_value > heat_value + 0.2)) ok = false;
    if (std::abs(g_value - kLimitTwoPoint) > 5e-3) ok = false;
    if (std::abs(heat_value - 1.0 / std::sqrt(std::numbers::pi)) > 5e-3) ok = false;

    // The report must record the outcome and keep the verdict advisory.
    ReportConfig cfg;
    cfg.samples = 20000;
    cfg.control_paths = 20000;
    cfg.n_max = 8;
    const auto cls = load_class(nlohmann::json{{"label", "two-point"}, {"gamma", {{1, -1}}}});
    const ReportOutput rep = run_report(cls, cfg);
    if (rep.exit_code != 0) ok = false;
    if (rep.doc["bounds"]["heat_bound_enforced"] != false) ok = false;
    bool recorded = false;
    for (const auto& v : rep.doc["verdicts"]) {
        if (v["name"] != "upper_heat") continue;
        const std::string detail = v["detail"];
        recorded = v["status"] == "SKIPPED" && detail.find("Here: solver") != std::string::npos;
    }
    if (!recorded) ok = false;

    // And the docs must spell the rule out.
    std::ifstream readme(SEQRAD_README_PATH);
    std::ostringstream buf;
    buf << readme.rdbuf();
    const std::string docs = buf.str();
    const bool documented = readme.good() && docs.find("not enforced") != std::string::npos &&
                            docs.find("independent") != std::string::npos;
    if (!documented) ok = false;

    line(10, ok,
         "fine-grid adjudication: solver " + fmt(g_value) + " > reference " + fmt(heat_value) +
             "; rule recorded in report (" + (recorded ? "yes" : "no") + ") and docs (" +
             (documented ? "yes" : "no") + ")");
}

void guard(int k, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        line(k, false, std::string("unhandled error: ") + e.what());
    }
}

}  // namespace

int main() {
    guard(1, criterion_1);
    guard(2, criterion_2);
    guard(3, criterion_3);
    guard(4, criterion_4);
    guard(5, criterion_5);

    std::vector<BatchClass> batch;
    try {
        batch = iid_batch();
    } catch (const std::exception& e) {
        line(6, false, std::string("batch construction failed: ") + e.what());
        line(7, false, "batch construction failed");
    }
    if (!batch.empty()) {
        guard(6, [&] { criterion_6(batch); });
        guard(7, [&] { criterion_7(batch); });
    }

    guard(8, criterion_8);
    guard(9, criterion_9);
    guard(10, criterion_10);

    std::printf("acceptance: %s\n", g_all_pass ? "all criteria passed" : "FAILURES above");
    return g_all_pass ? 0 : 1;
}
