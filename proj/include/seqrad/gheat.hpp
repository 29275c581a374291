#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seqrad/grid.hpp"
#include "seqrad/types.hpp"

namespace seqrad {

struct SolveOptions {
    /// Keep every time slice (needed by the greedy simulation policy).
    bool retain_slices = false;
    /// Run a second solve at (h/2, dt/2) and attach a first-order Richardson
    /// estimate. Informational only; never used in pass/fail decisions.
    bool refine = false;
};

struct SolveResult {
    Grid grid;
    std::vector<double> final_values;  // slice at t = 0
    double value_at_origin = 0.0;
    double h = 0.0;
    double dt = 0.0;
    std::optional<double> refined_value;  // from the (h/2, dt/2) solve
    std::optional<double> richardson_estimate;
    /// retained[r] is the slice at time r*dt, r = 0..t_steps (terminal last).
    std::vector<std::vector<double>> retained;

    ValueSlice final_slice() const { return export_slice(grid, final_values); }
};

/// One backward semi-Lagrangian step for the payoff-set nonlinearity:
/// out(x) = max over gamma of the average of next at x +- gamma*sqrt(dt).
std::vector<double> sl_step(const Grid& grid, const GammaSet& gamma,
                            std::span<const double> next_values);

/// Backward induction from the terminal max-coordinate slice to t = 0.
SolveResult solve_gheat(const GammaSet& gamma, const Grid& grid, const SolveOptions& opts = {});

/// Reference linear heat flow: m independent coordinates of variance b^2 each,
/// same terminal payoff. Its origin value equals b times the expected maximum
/// of m independent standard normals.
SolveResult solve_heat_reference(double b, const Grid& grid, const SolveOptions& opts = {});

}  // namespace seqrad
