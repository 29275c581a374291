#include "seqrad/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqrad/class_io.hpp"
#include "seqrad/rng.hpp"

namespace seqrad {

Policy Policy::constant(std::size_t index) {
    Policy p;
    p.kind = Kind::Constant;
    p.constant_index = index;
    return p;
}

Policy Policy::table(std::shared_ptr<const Grid> grid,
                     std::vector<std::vector<std::uint32_t>> choices) {
    if (!grid) throw BadPolicy("table policy needs a grid");
    if (choices.empty()) throw BadPolicy("table policy needs at least one time row");
    for (const auto& row : choices) {
        if (row.size() != grid->total_nodes) {
            throw BadPolicy("table rows must have one choice per grid node");
        }
    }
    Policy p;
    p.kind = Kind::Table;
    p.grid = std::move(grid);
    p.choices = std::move(choices);
    return p;
}

namespace {

std::size_t nearest_node(const Grid& grid, std::span<const double> x) {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < grid.m; ++a) {
        double u = std::nearbyint(x[a] / grid.h + static_cast<double>(grid.half_nodes));
        u = std::clamp(u, 0.0, static_cast<double>(grid.nodes_per_axis - 1));
        idx += static_cast<std::size_t>(u) * grid.strides[a];
    }
    return idx;
}

std::size_t greedy_choice(const SolveResult& sol, const GammaSet& gamma, double t,
                          std::span<const double> x) {
    const Grid& grid = sol.grid;
    // Continuation slice one solver step ahead of the slice covering t.
    const auto steps = static_cast<double>(grid.t_steps);
    std::size_t row = static_cast<std::size_t>(
        std::clamp(std::floor(t / grid.dt + 1e-9), 0.0, steps - 1.0));
    const std::vector<double>& next = sol.retained[row + 1];
    const double root_dt = std::sqrt(grid.dt);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    double xp[4], xm[4];
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto gv = gamma.vec(k);
        for (std::size_t a = 0; a < grid.m; ++a) {
            xp[a] = x[a] + gv[a] * root_dt;
            xm[a] = x[a] - gv[a] * root_dt;
        }
        const double v = 0.5 * (interpolate(grid, next, {xp, grid.m}) +
                                interpolate(grid, next, {xm, grid.m}));
        if (v > best) {
            best = v;
            best_index = k;
        }
    }
    return best_index;
}

}  // namespace

std::size_t policy_choice(const Policy& policy, const GammaSet& gamma, double t,
                          std::span<const double> x) {
    switch (policy.kind) {
        case Policy::Kind::Constant:
            return policy.constant_index;
        case Policy::Kind::Table: {
            const std::size_t rows = policy.choices.size();
            const std::size_t row = std::min(
                static_cast<std::size_t>(std::max(0.0, t) * static_cast<double>(rows)), rows - 1);
            return policy.choices[row][nearest_node(*policy.grid, x)];
        }
        case Policy::Kind::Greedy:
            return greedy_choice(*policy.solution, gamma, t, x);
    }
    throw BadPolicy("unknown policy kind");
}

MCEstimate simulate_policy(const GammaSet& gamma, const Policy& policy, std::int64_t steps,
                           std::int64_t paths, std::uint64_t seed) {
    if (steps < 1) throw MalformedSpec("simulation needs at least one step");
    if (paths < 1000) throw TooFewSamples("policy simulation needs at least 1000 paths");
    switch (policy.kind) {
        case Policy::Kind::Constant:
            if (policy.constant_index >= gamma.size()) {
                throw BadPolicy("constant policy index is out of range");
            }
            break;
        case Policy::Kind::Table:
            if (!policy.grid || policy.grid->m != gamma.m()) {
                throw BadPolicy("table policy grid does not match the payoff set");
            }
            for (const auto& row : policy.choices) {
                for (std::uint32_t c : row) {
                    if (c >= gamma.size()) throw BadPolicy("table policy choice is out of range");
                }
            }
            break;
        case Policy::Kind::Greedy:
            if (!policy.solution || policy.solution->retained.empty()) {
                throw SlicesMissing("greedy policy needs a solve with retained slices");
            }
            if (policy.solution->grid.m != gamma.m()) {
                throw BadPolicy("greedy policy solution does not match the payoff set");
            }
            break;
    }

    const std::size_t m = gamma.m();
    const NormalStream normals(seed);
    const double root_step = 1.0 / std::sqrt(static_cast<double>(steps));
    const double inv_steps = 1.0 / static_cast<double>(steps);
    std::vector<double> x(m);
    return mc_estimate(paths, seed, [&](std::int64_t p) {
        std::fill(x.begin(), x.end(), 0.0);
        const std::uint64_t base = static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(steps);
        for (std::int64_t k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) * inv_steps;
            const std::size_t idx = policy_choice(policy, gamma, t, x);
            const double dw = normals(base + static_cast<std::uint64_t>(k)) * root_step;
            const auto gv = gamma.vec(idx);
            for (std::size_t a = 0; a < m; ++a) x[a] += gv[a] * dw;
        }
        return max_coordinate(x);
    });
}

Policy greedy_policy_from_solution(const GammaSet& gamma,
                                   std::shared_ptr<const SolveResult> solution) {
    if (!solution || solution->retained.empty()) {
        throw SlicesMissing("greedy policy needs a solve with retained slices");
    }
    if (solution->grid.m != gamma.m()) {
        throw BadPolicy("solution dimension does not match the payoff set");
    }
    if (gamma.size() == 1) return Policy::constant(0);  // only one choice exists
    Policy p;
    p.kind = Policy::Kind::Greedy;
    p.solution = std::move(solution);
    return p;
}

}  // namespace seqrad
