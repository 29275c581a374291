#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "seqrad/gheat.hpp"
#include "seqrad/types.hpp"

namespace seqrad {

/// Feedback policy: a payoff choice as a function of (time, state). Every
/// simulated policy certifies the solver value from below.
struct Policy {
    enum class Kind { Constant, Table, Greedy };

    Kind kind = Kind::Constant;
    std::size_t constant_index = 0;
    /// Table kind: choices[row][node] on the grid, row r covering the time
    /// window [r/rows, (r+1)/rows); states snap to the nearest node.
    std::shared_ptr<const Grid> grid;
    std::vector<std::vector<std::uint32_t>> choices;
    /// Greedy kind: the retained slices the argmax is read from.
    std::shared_ptr<const SolveResult> solution;

    static Policy constant(std::size_t index);
    static Policy table(std::shared_ptr<const Grid> grid,
                        std::vector<std::vector<std::uint32_t>> choices);
};

/// Payoff index the policy picks at (t, x).
std::size_t policy_choice(const Policy& policy, const GammaSet& gamma, double t,
                          std::span<const double> x);

/// Euler simulation of X_{k+1} = X_k + gamma(t_k, X_k) dW_k with one scalar
/// Brownian increment shared by all coordinates, started at the origin;
/// returns the Monte Carlo estimate of the expected maximum coordinate at 1.
MCEstimate simulate_policy(const GammaSet& gamma, const Policy& policy, std::int64_t steps,
                           std::int64_t paths, std::uint64_t seed);

/// Policy that picks, at each (t, x), the payoff maximizing the two-point
/// average of the retained next slice; ties go to the lowest index. Requires
/// the solve to have retained its slices.
Policy greedy_policy_from_solution(const GammaSet& gamma,
                                   std::shared_ptr<const SolveResult> solution);

}  // namespace seqrad
