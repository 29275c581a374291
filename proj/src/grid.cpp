#include "seqrad/grid.hpp"

#include <cmath>

namespace seqrad {

namespace {

// Real-valued node index of coordinate x on one axis, snapped to the nearest
// integer when within 1e-9 so displacements meant to land on nodes do so
// exactly despite roundoff.
double axis_position(const Grid& g, double x) {
    double u = x / g.h + static_cast<double>(g.half_nodes);
    const double r = std::nearbyint(u);
    if (std::abs(u - r) <= 1e-9) u = r;
    return u;
}

}  // namespace

std::size_t Grid::origin_index() const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < m; ++a) idx += half_nodes * strides[a];
    return idx;
}

void Grid::unflatten(std::size_t flat, std::span<std::size_t> out) const {
    for (std::size_t a = 0; a < m; ++a) {
        out[a] = flat / strides[a];
        flat %= strides[a];
    }
}

Grid build_grid(std::size_t m, const GammaSet& gamma, double h, double dt,
                std::optional<double> L, std::size_t node_budget) {
    if (m == 0 || m != gamma.m()) throw DimensionMismatch("grid dimension must match the payoff set");
    if (m > 4) throw DimensionTooHigh("grids support m <= 4; use the exact DP or bounds above that");
    if (!(h > 0.0) || !(dt > 0.0)) throw MalformedSpec("grid spacing and time step must be positive");

    const double b = gamma.bound();
    double width = L ? *L : std::max(6.0 * b, 8.0 * h);
    if (width < 2.0 * b) {
        throw MalformedSpec("domain half-width must cover at least twice the payoff bound");
    }

    Grid g;
    g.m = m;
    g.h = h;
    g.requested_L = width;
    g.half_nodes = static_cast<std::size_t>(std::floor(width / h + 1e-9));
    if (g.half_nodes < 1) throw MalformedSpec("grid must have at least one interior node per side");
    g.nodes_per_axis = 2 * g.half_nodes + 1;

    double total = 1.0;
    for (std::size_t a = 0; a < m; ++a) total *= static_cast<double>(g.nodes_per_axis);
    if (total > static_cast<double>(node_budget)) {
        throw BudgetExceeded("grid would need " + std::to_string(static_cast<std::int64_t>(total)) +
                             " nodes, budget is " + std::to_string(node_budget));
    }
    g.total_nodes = static_cast<std::size_t>(total);

    g.t_steps = static_cast<std::size_t>(std::ceil(1.0 / dt - 1e-9));
    if (g.t_steps < 1) g.t_steps = 1;
    g.dt = 1.0 / static_cast<double>(g.t_steps);

    g.strides.assign(m, 1);
    for (std::size_t a = m; a-- > 1;) {
        g.strides[a - 1] = g.strides[a] * g.nodes_per_axis;
    }
    return g;
}

double interpolate(const Grid& grid, std::span<const double> node_values,
                   std::span<const double> x) {
    if (x.size() != grid.m) throw DimensionMismatch("point dimension must match the grid");
    const std::size_t m = grid.m;
    const std::size_t n = grid.nodes_per_axis;

    std::size_t base[4];
    double frac[4];
    std::size_t active[4];
    std::size_t active_count = 0;
    std::size_t base_index = 0;
    for (std::size_t a = 0; a < m; ++a) {
        const double u = axis_position(grid, x[a]);
        double i0 = std::floor(u);
        // Clamp to the last interior cell; frac outside [0,1] extrapolates
        // linearly from the outermost two planes.
        if (i0 < 0.0) i0 = 0.0;
        if (i0 > static_cast<double>(n - 2)) i0 = static_cast<double>(n - 2);
        base[a] = static_cast<std::size_t>(i0);
        frac[a] = u - i0;
        base_index += base[a] * grid.strides[a];
        if (frac[a] != 0.0) active[active_count++] = a;
    }

    double value = 0.0;
    const std::size_t corners = std::size_t{1} << active_count;
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t idx = base_index;
        for (std::size_t j = 0; j < active_count; ++j) {
            const std::size_t a = active[j];
            if ((c >> j) & 1) {
                w *= frac[a];
                idx += grid.strides[a];
            } else {
                w *= 1.0 - frac[a];
            }
        }
        value += w * node_values[idx];
    }
    return value;
}

std::vector<double> terminal_slice(const Grid& grid) {
    std::vector<double> values(grid.total_nodes);
    std::size_t multi[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < grid.total_nodes; ++i) {
        double best = grid.coord(multi[0]);
        for (std::size_t a = 1; a < grid.m; ++a) best = std::max(best, grid.coord(multi[a]));
        values[i] = best;
        for (std::size_t a = grid.m; a-- > 0;) {
            if (++multi[a] < grid.nodes_per_axis) break;
            multi[a] = 0;
        }
    }
    return values;
}

ValueSlice export_slice(const Grid& grid, std::span<const double> node_values) {
    ValueSlice slice;
    slice.points.reserve(grid.total_nodes);
    slice.values.assign(node_values.begin(), node_values.end());
    std::size_t multi[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < grid.total_nodes; ++i) {
        std::vector<double> p(grid.m);
        for (std::size_t a = 0; a < grid.m; ++a) p[a] = grid.coord(multi[a]);
        slice.points.push_back(std::move(p));
        for (std::size_t a = grid.m; a-- > 0;) {
            if (++multi[a] < grid.nodes_per_axis) break;
            multi[a] = 0;
        }
    }
    return slice;
}

}  // namespace seqrad
