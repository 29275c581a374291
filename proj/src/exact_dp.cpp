#include "seqrad/exact_dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "seqrad/class_io.hpp"

namespace seqrad {

namespace {

constexpr std::int64_t kDenominatorCap = 1'000'000;
// Quantization lattice for the fallback keying: inputs rounded to 2^-40.
constexpr double kQuantScale = 1099511627776.0;  // 2^40
constexpr int kHardCapUnmemoized = 24;

/// Smallest denominator q <= limit with x*q within rounding noise of an
/// integer, found along the continued-fraction convergents of x.
std::optional<std::int64_t> denominator_of(double v, std::int64_t limit) {
    const double x = std::abs(v);
    if (x <= 1e-15) return 1;
    auto near_integer = [&](std::int64_t q) {
        const double s = x * static_cast<double>(q);
        return std::abs(s - std::round(s)) <= 1e-9 + 1e-12 * s;
    };
    std::int64_t q_prev = 0;
    std::int64_t q = 1;
    double y = x - std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (near_integer(q)) return q;
        if (y <= 1e-12) break;
        y = 1.0 / y;
        const double a = std::floor(y);
        y -= a;
        if (a > static_cast<double>(limit)) break;
        const std::int64_t q_next = static_cast<std::int64_t>(a) * q + q_prev;
        // q_next == q is legitimate once (first partial quotient 1); shrinking
        // means overflow wrap.
        if (q_next > limit || q_next < q) break;
        q_prev = q;
        q = q_next;
    }
    return std::nullopt;
}

/// Common denominator for all payoff coordinates, or nullopt if none exists
/// within the cap (then the caller falls back to quantized keying).
std::optional<std::int64_t> common_denominator(const GammaSet& gamma) {
    std::int64_t d = 1;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        for (double v : gamma.vec(k)) {
            const auto q = denominator_of(v, kDenominatorCap);
            if (!q) return std::nullopt;
            d = std::lcm(d, *q);
            if (d > kDenominatorCap) return std::nullopt;
        }
    }
    return d;
}

/// Payoff vectors scaled to integers; empty result means the scale does not
/// represent the inputs exactly enough.
std::optional<std::vector<std::int64_t>> scaled_integer_payoffs(const GammaSet& gamma,
                                                                std::int64_t scale) {
    std::vector<std::int64_t> out;
    out.reserve(gamma.size() * gamma.m());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        for (double v : gamma.vec(k)) {
            const double s = v * static_cast<double>(scale);
            const double r = std::round(s);
            if (std::abs(s - r) > 1e-9 + 1e-12 * std::abs(s)) return std::nullopt;
            out.push_back(static_cast<std::int64_t>(r));
        }
    }
    return out;
}

std::vector<std::int64_t> quantized_payoffs(const GammaSet& gamma) {
    std::vector<std::int64_t> out;
    out.reserve(gamma.size() * gamma.m());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        for (double v : gamma.vec(k)) out.push_back(std::llround(v * kQuantScale));
    }
    return out;
}

/// Sorted deduplicated m-tuples in flat storage.
struct Level {
    std::vector<std::int64_t> flat;
    std::size_t m = 1;
    std::size_t count() const { return flat.empty() ? 0 : flat.size() / m; }
    const std::int64_t* tuple(std::size_t i) const { return flat.data() + i * m; }
};

int compare_tuple(const std::int64_t* a, const std::int64_t* b, std::size_t m) {
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

Level sorted_unique(std::vector<std::int64_t> candidates, std::size_t m) {
    const std::size_t n = candidates.size() / m;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return compare_tuple(candidates.data() + a * m, candidates.data() + b * m, m) < 0;
    });
    Level level;
    level.m = m;
    level.flat.reserve(candidates.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t* t = candidates.data() + order[i] * m;
        if (!level.flat.empty() &&
            compare_tuple(level.flat.data() + level.flat.size() - m, t, m) == 0) {
            continue;
        }
        level.flat.insert(level.flat.end(), t, t + m);
    }
    return level;
}

std::size_t index_in_level(const Level& level, const std::int64_t* key) {
    std::size_t lo = 0;
    std::size_t hi = level.count();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (compare_tuple(level.tuple(mid), key, level.m) < 0) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;  // callers only query states known to exist
}

DPResult memoized_value(const GammaSet& gamma, const DPConfig& cfg,
                        const std::vector<std::int64_t>& payoffs_int, std::int64_t scale,
                        bool float_keyed) {
    const std::size_t m = gamma.m();
    const std::size_t g = gamma.size();
    const int n = cfg.n;

    std::int64_t max_component = 0;
    for (std::int64_t v : payoffs_int) max_component = std::max(max_component, std::abs(v));
    if (static_cast<double>(max_component) * n > 4.4e18) {
        throw ScaleOverflow("scaled state components would exceed 62 bits");
    }

    // Forward reachable states per round.
    std::vector<Level> levels(static_cast<std::size_t>(n) + 1);
    levels[0].m = m;
    levels[0].flat.assign(m, 0);
    std::int64_t evaluations = 0;
    for (int t = 0; t < n; ++t) {
        const Level& cur = levels[t];
        evaluations += static_cast<std::int64_t>(cur.count()) * static_cast<std::int64_t>(g);
        if (evaluations > cfg.node_budget) {
            throw StateExplosion("reachable-state budget exceeded at round " + std::to_string(t));
        }
        std::vector<std::int64_t> candidates;
        candidates.reserve(cur.count() * g * 2 * m);
        for (std::size_t i = 0; i < cur.count(); ++i) {
            const std::int64_t* s = cur.tuple(i);
            for (std::size_t k = 0; k < g; ++k) {
                const std::int64_t* gv = payoffs_int.data() + k * m;
                for (std::size_t c = 0; c < m; ++c) candidates.push_back(s[c] + gv[c]);
                for (std::size_t c = 0; c < m; ++c) candidates.push_back(s[c] - gv[c]);
            }
        }
        levels[t + 1] = sorted_unique(std::move(candidates), m);
    }

    // Backward sweep; leaves carry the single 1/(scale*sqrt(n)) normalization.
    const double leaf_scale = 1.0 / (static_cast<double>(scale) * std::sqrt(static_cast<double>(n)));
    const Level& last = levels[n];
    std::vector<double> next_values(last.count());
    for (std::size_t i = 0; i < last.count(); ++i) {
        const std::int64_t* s = last.tuple(i);
        std::int64_t best = s[0];
        for (std::size_t c = 1; c < m; ++c) best = std::max(best, s[c]);
        next_values[i] = static_cast<double>(best) * leaf_scale;
    }
    std::vector<std::int64_t> probe(m);
    for (int t = n - 1; t >= 0; --t) {
        const Level& cur = levels[t];
        const Level& nxt = levels[t + 1];
        std::vector<double> cur_values(cur.count());
        for (std::size_t i = 0; i < cur.count(); ++i) {
            const std::int64_t* s = cur.tuple(i);
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < g; ++k) {
                const std::int64_t* gv = payoffs_int.data() + k * m;
                for (std::size_t c = 0; c < m; ++c) probe[c] = s[c] + gv[c];
                const double up = next_values[index_in_level(nxt, probe.data())];
                for (std::size_t c = 0; c < m; ++c) probe[c] = s[c] - gv[c];
                const double down = next_values[index_in_level(nxt, probe.data())];
                best = std::max(best, 0.5 * (up + down));
            }
            cur_values[i] = best;
        }
        next_values = std::move(cur_values);
    }

    DPResult out;
    out.value = next_values[0];
    out.mode_used = float_keyed ? MemoMode::FloatHash : MemoMode::ExactInteger;
    out.scale_denominator = scale;
    out.evaluations = evaluations;
    out.float_keyed = float_keyed;
    out.size_warning = n > 16 && g > 1;
    return out;
}

double unmemoized_recurse(const GammaSet& gamma, std::vector<double>& x, int t, int n,
                          double inv_sqrt_n) {
    if (t == n) return max_coordinate(x) * inv_sqrt_n;
    const std::size_t m = gamma.m();
    const std::vector<double> saved(x);  // restore exactly, no +g-g roundoff
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto gv = gamma.vec(k);
        for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] + gv[c];
        const double up = unmemoized_recurse(gamma, x, t + 1, n, inv_sqrt_n);
        for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] - gv[c];
        const double down = unmemoized_recurse(gamma, x, t + 1, n, inv_sqrt_n);
        best = std::max(best, 0.5 * (up + down));
    }
    x = saved;
    return best;
}

}  // namespace

std::pair<double, std::size_t> backward_step(
    const std::function<double(std::span<const double>)>& next,
    std::span<const double> x, const GammaSet& gamma, int n) {
    if (x.size() != gamma.m()) throw DimensionMismatch("state dimension must match payoff dimension");
    if (n < 1) throw MalformedSpec("round count must be positive");
    const double step = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> probe(x.size());
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto gv = gamma.vec(k);
        for (std::size_t c = 0; c < x.size(); ++c) probe[c] = x[c] + gv[c] * step;
        const double up = next(probe);
        for (std::size_t c = 0; c < x.size(); ++c) probe[c] = x[c] - gv[c] * step;
        const double down = next(probe);
        const double v = 0.5 * (up + down);
        if (v > best) {
            best = v;
            best_index = k;
        }
    }
    return {best, best_index};
}

DPResult dp_value_full(const GammaSet& gamma, const DPConfig& cfg) {
    if (cfg.n < 1) throw MalformedSpec("round count must be positive");
    if (cfg.scale_denominator < 0 || cfg.scale_denominator > kDenominatorCap) {
        throw MalformedSpec("scale denominator must be in [0, 10^6]");
    }

    if (cfg.memo_mode == MemoMode::None) {
        if (cfg.n > kHardCapUnmemoized) {
            throw StateExplosion("n above the hard cap for unmemoized evaluation");
        }
        const double est = std::pow(2.0 * static_cast<double>(gamma.size()), cfg.n);
        if (est > static_cast<double>(cfg.node_budget)) {
            throw StateExplosion("unmemoized evaluation would exceed the node budget");
        }
        std::vector<double> x(gamma.m(), 0.0);
        DPResult out;
        out.value = unmemoized_recurse(gamma, x, 0, cfg.n,
                                       1.0 / std::sqrt(static_cast<double>(cfg.n)));
        out.mode_used = MemoMode::None;
        out.scale_denominator = 0;
        out.evaluations = static_cast<std::int64_t>(est);
        out.size_warning = cfg.n > 16 && gamma.size() > 1;
        return out;
    }

    if (cfg.memo_mode == MemoMode::ExactInteger) {
        const std::int64_t wanted =
            cfg.scale_denominator > 0 ? cfg.scale_denominator : common_denominator(gamma).value_or(0);
        if (wanted > 0) {
            if (auto ints = scaled_integer_payoffs(gamma, wanted)) {
                return memoized_value(gamma, cfg, *ints, wanted, false);
            }
        }
        // No exact representation within the cap: quantized fallback, flagged.
    }
    return memoized_value(gamma, cfg, quantized_payoffs(gamma),
                          static_cast<std::int64_t>(kQuantScale), true);
}

double dp_value(const GammaSet& gamma, const DPConfig& cfg) { return dp_value_full(gamma, cfg).value; }

double brute_force_value(const GammaSet& gamma, int n) {
    if (n < 1 || n > 3) throw TooLarge("brute force supports n in 1..3 only");
    const std::size_t m = gamma.m();
    const std::size_t g = gamma.size();
    const std::size_t tree_nodes = (std::size_t{1} << n) - 1;
    const double assignment_count = std::pow(static_cast<double>(g), tree_nodes);
    if (assignment_count > 1e6) throw TooLarge("too many adapted assignments to enumerate");

    const std::size_t paths = std::size_t{1} << n;
    const double inv_norm = 1.0 / (static_cast<double>(paths) * std::sqrt(static_cast<double>(n)));
    std::vector<std::size_t> assign(tree_nodes, 0);
    std::vector<double> x(m);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        double total = 0.0;
        for (std::size_t path = 0; path < paths; ++path) {
            std::fill(x.begin(), x.end(), 0.0);
            std::size_t prefix = 0;  // sign bits seen so far, oldest in the high bit
            for (int t = 0; t < n; ++t) {
                const std::size_t node = (std::size_t{1} << t) - 1 + prefix;
                const auto gv = gamma.vec(assign[node]);
                const std::size_t bit = (path >> t) & 1;
                const double sign = bit ? 1.0 : -1.0;
                for (std::size_t c = 0; c < m; ++c) x[c] += sign * gv[c];
                prefix = (prefix << 1) | bit;
            }
            total += max_coordinate(x);
        }
        best = std::max(best, total * inv_norm);

        // Next assignment in base-|gamma| counting order.
        std::size_t pos = 0;
        while (pos < tree_nodes && ++assign[pos] == g) {
            assign[pos] = 0;
            ++pos;
        }
        if (pos == tree_nodes) break;
    }
    return best;
}

std::vector<ConvergenceRow> convergence_table(const GammaSet& gamma,
                                              const std::vector<int>& schedule,
                                              const DPConfig& base) {
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] <= schedule[i - 1]) {
            throw MalformedSpec("schedule must be strictly ascending");
        }
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(schedule.size());
    std::optional<double> prev;
    for (int n : schedule) {
        ConvergenceRow row;
        row.n = n;
        DPConfig cfg = base;
        cfg.n = n;
        try {
            row.value = dp_value(gamma, cfg);
            if (prev) row.delta = row.value - *prev;
            prev = row.value;
        } catch (const Error& e) {
            row.skipped = true;
            row.reason = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

StrategyNode build_strategy(const GammaSet& gamma, std::vector<double>& x, int t, int n,
                            double inv_sqrt_n) {
    StrategyNode node;
    if (t == n) return node;
    const std::size_t m = gamma.m();
    const std::vector<double> saved(x);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto gv = gamma.vec(k);
        for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] + gv[c];
        const double up = unmemoized_recurse(gamma, x, t + 1, n, inv_sqrt_n);
        for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] - gv[c];
        const double down = unmemoized_recurse(gamma, x, t + 1, n, inv_sqrt_n);
        const double v = 0.5 * (up + down);
        if (v > best) {
            best = v;
            node.gamma_index = k;
        }
    }
    const auto gv = gamma.vec(node.gamma_index);
    node.children.resize(2);
    for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] + gv[c];
    node.children[0] = build_strategy(gamma, x, t + 1, n, inv_sqrt_n);
    for (std::size_t c = 0; c < m; ++c) x[c] = saved[c] - gv[c];
    node.children[1] = build_strategy(gamma, x, t + 1, n, inv_sqrt_n);
    x = saved;
    return node;
}

}  // namespace

StrategyNode strategy_tree(const GammaSet& gamma, int n) {
    if (n < 1) throw MalformedSpec("round count must be positive");
    if (n > 10) throw TooLarge("strategy dump is limited to n <= 10");
    const double cost =
        std::pow(2.0 * static_cast<double>(gamma.size()), n) * static_cast<double>(n);
    if (cost > 1e8) throw TooLarge("strategy dump would enumerate too many nodes");
    std::vector<double> x(gamma.m(), 0.0);
    return build_strategy(gamma, x, 0, n, 1.0 / std::sqrt(static_cast<double>(n)));
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "n,value,delta\n";
    char buf[96];
    for (const auto& row : rows) {
        if (row.skipped) continue;
        if (row.delta) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", row.n, row.value, *row.delta);
        } else {
            std::snprintf(buf, sizeof buf, "%d,%.17g,\n", row.n, row.value);
        }
        out += buf;
    }
    return out;
}

}  // namespace seqrad
