#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqrad/types.hpp"

namespace seqrad {

/// Uniform tensor grid on [-extent, extent]^m with the origin as a node, plus
/// the uniform time partition of [0,1]. dt is snapped to 1/t_steps so the
/// backward sweep lands exactly on t = 0.
struct Grid {
    std::size_t m = 1;
    double h = 0.1;
    double requested_L = 6.0;
    std::size_t half_nodes = 0;          // extent = half_nodes * h
    std::size_t nodes_per_axis = 1;      // 2 * half_nodes + 1, odd by construction
    double dt = 0.1;                     // effective value, 1 / t_steps
    std::size_t t_steps = 10;
    std::size_t total_nodes = 1;
    std::vector<std::size_t> strides;    // row-major, last axis contiguous

    double extent() const { return static_cast<double>(half_nodes) * h; }
    double coord(std::size_t index) const {
        return (static_cast<double>(index) - static_cast<double>(half_nodes)) * h;
    }
    std::size_t origin_index() const;
    /// Decode flat node index into per-axis indices.
    void unflatten(std::size_t flat, std::span<std::size_t> out) const;
};

/// Build a grid sized for the payoff set: L defaults to max(6*b, 8*h) and must
/// cover at least 2*b when supplied explicitly.
Grid build_grid(std::size_t m, const GammaSet& gamma, double h, double dt,
                std::optional<double> L = std::nullopt,
                std::size_t node_budget = 20'000'000);

/// Multilinear interpolation of node values at x; outside the box the value is
/// extended linearly along each exiting axis from the outermost two planes.
/// Exact at nodes, reproduces affine functions everywhere.
double interpolate(const Grid& grid, std::span<const double> node_values,
                   std::span<const double> x);

/// Node values of the max-coordinate payoff g, the terminal condition.
std::vector<double> terminal_slice(const Grid& grid);

/// Materialized (point, value) view of a slice, for export and tests.
ValueSlice export_slice(const Grid& grid, std::span<const double> node_values);

}  // namespace seqrad
