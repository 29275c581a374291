#include "seqrad/gheat.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace seqrad {

namespace {

constexpr std::size_t kRetainByteCap = 200'000'000;
constexpr std::size_t kRefineNodeBudget = 50'000'000;

/// Fixed read pattern for one displacement d (index units): corner offsets and
/// weights valid wherever the whole stencil stays inside the node box.
struct Stencil {
    std::ptrdiff_t corner_offsets[16];
    double corner_weights[16];
    std::size_t corners = 1;
    std::size_t lo[4] = {0, 0, 0, 0};  // per-axis fast-path index range
    std::size_t hi[4] = {0, 0, 0, 0};
    double shift[4] = {0, 0, 0, 0};    // displacement in state units, slow path
};

Stencil make_stencil(const Grid& grid, std::span<const double> displacement) {
    Stencil s;
    std::ptrdiff_t base[4];
    double frac[4];
    std::size_t active[4];
    std::size_t active_count = 0;
    std::ptrdiff_t base_offset = 0;
    for (std::size_t a = 0; a < grid.m; ++a) {
        s.shift[a] = displacement[a];
        double u = displacement[a] / grid.h;
        const double r = std::nearbyint(u);
        if (std::abs(u - r) <= 1e-9) u = r;
        base[a] = static_cast<std::ptrdiff_t>(std::floor(u));
        frac[a] = u - std::floor(u);
        base_offset += base[a] * static_cast<std::ptrdiff_t>(grid.strides[a]);
        if (frac[a] != 0.0) active[active_count++] = a;

        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.nodes_per_axis);
        const std::ptrdiff_t need_hi = frac[a] != 0.0 ? 1 : 0;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -base[a]);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, n - 1 - base[a] - need_hi);
        s.lo[a] = static_cast<std::size_t>(std::max<std::ptrdiff_t>(lo, 0));
        s.hi[a] = hi >= lo ? static_cast<std::size_t>(hi) : 0;
        if (hi < lo) s.hi[a] = std::size_t(-1);  // marks "no fast path on this axis"
    }
    s.corners = std::size_t{1} << active_count;
    for (std::size_t c = 0; c < s.corners; ++c) {
        double w = 1.0;
        std::ptrdiff_t off = base_offset;
        for (std::size_t j = 0; j < active_count; ++j) {
            const std::size_t a = active[j];
            if ((c >> j) & 1) {
                w *= frac[a];
                off += static_cast<std::ptrdiff_t>(grid.strides[a]);
            } else {
                w *= 1.0 - frac[a];
            }
        }
        s.corner_offsets[c] = off;
        s.corner_weights[c] = w;
    }
    return s;
}

inline double apply_stencil(const Stencil& s, const double* values, std::size_t node) {
    double v = 0.0;
    for (std::size_t c = 0; c < s.corners; ++c) {
        v += s.corner_weights[c] * values[static_cast<std::ptrdiff_t>(node) + s.corner_offsets[c]];
    }
    return v;
}

/// Two stencils (the +/- pair of one displacement) and their joint fast box.
struct StencilPair {
    Stencil plus;
    Stencil minus;
    std::size_t lo[4];
    std::size_t hi[4];
    bool has_fast = true;
};

StencilPair make_stencil_pair(const Grid& grid, std::span<const double> displacement) {
    StencilPair p;
    std::vector<double> neg(displacement.begin(), displacement.end());
    for (double& v : neg) v = -v;
    p.plus = make_stencil(grid, displacement);
    p.minus = make_stencil(grid, neg);
    for (std::size_t a = 0; a < grid.m; ++a) {
        if (p.plus.hi[a] == std::size_t(-1) || p.minus.hi[a] == std::size_t(-1)) {
            p.has_fast = false;
            p.lo[a] = 1;
            p.hi[a] = 0;
            continue;
        }
        p.lo[a] = std::max(p.plus.lo[a], p.minus.lo[a]);
        p.hi[a] = std::min(p.plus.hi[a], p.minus.hi[a]);
        if (p.lo[a] > p.hi[a]) p.has_fast = false;
    }
    return p;
}

/// Average of the +/- reads at one node; slow path reconstructs coordinates.
double pair_value(const StencilPair& p, const Grid& grid, std::span<const double> next,
                  std::size_t node, const std::size_t* multi, bool fast) {
    if (fast) {
        return 0.5 * (apply_stencil(p.plus, next.data(), node) +
                      apply_stencil(p.minus, next.data(), node));
    }
    double xp[4], xm[4];
    for (std::size_t a = 0; a < grid.m; ++a) {
        const double x = grid.coord(multi[a]);
        xp[a] = x + p.plus.shift[a];
        xm[a] = x + p.minus.shift[a];
    }
    return 0.5 * (interpolate(grid, next, {xp, grid.m}) + interpolate(grid, next, {xm, grid.m}));
}

enum class Combine { Max, Mean };

/// One backward step over all nodes for a family of displacement pairs.
void step_kernel(const Grid& grid, const std::vector<StencilPair>& pairs, Combine combine,
                 std::span<const double> next, std::vector<double>& out) {
    const std::size_t m = grid.m;
    std::size_t multi[4] = {0, 0, 0, 0};
    const double mean_w = pairs.empty() ? 0.0 : 1.0 / static_cast<double>(pairs.size());
    for (std::size_t node = 0; node < grid.total_nodes; ++node) {
        double acc = combine == Combine::Max ? -std::numeric_limits<double>::infinity() : 0.0;
        for (const StencilPair& p : pairs) {
            bool fast = p.has_fast;
            if (fast) {
                for (std::size_t a = 0; a < m; ++a) {
                    if (multi[a] < p.lo[a] || multi[a] > p.hi[a]) {
                        fast = false;
                        break;
                    }
                }
            }
            const double v = pair_value(p, grid, next, node, multi, fast);
            if (combine == Combine::Max) {
                acc = std::max(acc, v);
            } else {
                acc += v * mean_w;
            }
        }
        out[node] = acc;
        for (std::size_t a = m; a-- > 0;) {
            if (++multi[a] < grid.nodes_per_axis) break;
            multi[a] = 0;
        }
    }
}

std::vector<StencilPair> gamma_pairs(const Grid& grid, const GammaSet& gamma) {
    const double root_dt = std::sqrt(grid.dt);
    std::vector<StencilPair> pairs;
    pairs.reserve(gamma.size());
    std::vector<double> d(grid.m);
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto gv = gamma.vec(k);
        for (std::size_t a = 0; a < grid.m; ++a) d[a] = gv[a] * root_dt;
        pairs.push_back(make_stencil_pair(grid, d));
    }
    return pairs;
}

std::vector<StencilPair> axis_pairs(const Grid& grid, double b) {
    // Averaging over axes divides the generator by m; scale displacements by
    // sqrt(m) so each coordinate keeps variance b^2 per unit time.
    const double scale = b * std::sqrt(static_cast<double>(grid.m) * grid.dt);
    std::vector<StencilPair> pairs;
    pairs.reserve(grid.m);
    std::vector<double> d(grid.m, 0.0);
    for (std::size_t a = 0; a < grid.m; ++a) {
        d.assign(grid.m, 0.0);
        d[a] = scale;
        pairs.push_back(make_stencil_pair(grid, d));
    }
    return pairs;
}

SolveResult sweep(const Grid& grid, const std::vector<StencilPair>& pairs, Combine combine,
                  bool retain) {
    SolveResult result;
    result.grid = grid;
    result.h = grid.h;
    result.dt = grid.dt;
    if (retain) {
        const double bytes = static_cast<double>(grid.total_nodes) *
                             static_cast<double>(grid.t_steps + 1) * sizeof(double);
        if (bytes > static_cast<double>(kRetainByteCap)) {
            throw BudgetExceeded("retaining every slice would exceed the memory cap");
        }
        result.retained.resize(grid.t_steps + 1);
    }

    std::vector<double> next = terminal_slice(grid);
    std::vector<double> cur(grid.total_nodes);
    if (retain) result.retained[grid.t_steps] = next;
    for (std::size_t r = grid.t_steps; r-- > 0;) {
        step_kernel(grid, pairs, combine, next, cur);
        next.swap(cur);
        if (retain) result.retained[r] = next;
    }
    result.final_values = std::move(next);
    result.value_at_origin = result.final_values[grid.origin_index()];
    return result;
}

}  // namespace

std::vector<double> sl_step(const Grid& grid, const GammaSet& gamma,
                            std::span<const double> next_values) {
    if (gamma.m() != grid.m) throw DimensionMismatch("payoff dimension must match the grid");
    if (next_values.size() != grid.total_nodes) {
        throw DimensionMismatch("slice length must match the grid node count");
    }
    std::vector<double> out(grid.total_nodes);
    step_kernel(grid, gamma_pairs(grid, gamma), Combine::Max, next_values, out);
    return out;
}

SolveResult solve_gheat(const GammaSet& gamma, const Grid& grid, const SolveOptions& opts) {
    if (gamma.m() != grid.m) throw DimensionMismatch("payoff dimension must match the grid");
    SolveResult result = sweep(grid, gamma_pairs(grid, gamma), Combine::Max, opts.retain_slices);
    if (opts.refine) {
        const Grid half = build_grid(grid.m, gamma, grid.h / 2.0, grid.dt / 2.0, grid.requested_L,
                                     kRefineNodeBudget);
        const SolveResult fine = sweep(half, gamma_pairs(half, gamma), Combine::Max, false);
        result.refined_value = fine.value_at_origin;
        // First-order error model (error ~ C*h at dt proportional to h).
        result.richardson_estimate = 2.0 * fine.value_at_origin - result.value_at_origin;
    }
    return result;
}

SolveResult solve_heat_reference(double b, const Grid& grid, const SolveOptions& opts) {
    if (b < 0.0) throw MalformedSpec("coordinate bound must be nonnegative");
    SolveResult result = sweep(grid, axis_pairs(grid, b), Combine::Mean, opts.retain_slices);
    if (opts.refine) {
        GammaSet dummy(grid.m, {std::vector<double>(grid.m, b)});
        const Grid half = build_grid(grid.m, dummy, grid.h / 2.0, grid.dt / 2.0, grid.requested_L,
                                     kRefineNodeBudget);
        const SolveResult fine = sweep(half, axis_pairs(half, b), Combine::Mean, false);
        result.refined_value = fine.value_at_origin;
        result.richardson_estimate = 2.0 * fine.value_at_origin - result.value_at_origin;
    }
    return result;
}

}  // namespace seqrad
