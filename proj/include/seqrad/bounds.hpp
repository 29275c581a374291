#pragma once

#include <string>
#include <vector>

#include "seqrad/types.hpp"

namespace seqrad {

struct LPResult {
    double t_star = 0.0;
    Measure nu_star;
};

/// Maximize t subject to <costs[p], nu> >= t for every row p and nu in the
/// probability simplex. Dense two-phase simplex with Bland's rule; tiny sizes.
LPResult simplex_lp(const std::vector<std::vector<double>>& pair_costs);

struct SeparationResult {
    double a = 0.0;       // sqrt of the LP optimum
    Measure nu_star;
};

/// Best-measure minimum pairwise L2 separation of the class: costs are the
/// squared differences (f_i - f_j)^2 per point, over all pairs i < j.
SeparationResult separation_value(const FunctionClass& fc);

/// b times the expected maximum of m independent standard normals, by adaptive
/// quadrature to absolute tolerance 1e-10.
double heat_upper_bound(std::size_t m, double b);

struct SandwichReport {
    double a_value = 0.0;
    double lower = 0.0;        // a * sqrt(ln m) / 17
    double upper_logm = 0.0;   // sqrt(2) * b * sqrt(ln m)
    double upper_heat = 0.0;   // reference heat value, informational only
    bool heat_bound_enforced = false;
    Measure argmax_measure;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// The note attached to every sandwich report explaining why the reference
/// heat value does not participate in the verdict.
extern const char* const kHeatReferenceNote;

/// Check lower - tol <= estimate <= upper_logm + tol. The reference heat value
/// is attached for inspection but never enforced: for payoff sets with
/// anti-correlated coordinates (already at {(1,-1)}) the measured complexity
/// exceeds it, so it is not an upper bound in general.
SandwichReport sandwich_check(const FunctionClass& fc, double estimate, double tolerance);

}  // namespace seqrad
