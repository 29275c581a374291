#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "seqrad/types.hpp"

namespace seqrad {

/// Second-moment matrix of the class under the measure: Sigma = sum over
/// points of weight * F(z) F(z)^T. Positive semidefinite by construction.
SymMatrix covariance(const FunctionClass& fc, const Measure& nu);

/// Factor Sigma = A A^T (row-major A) via eigendecomposition, clipping
/// eigenvalues in [-1e-8, 0) to 0. More negative means the input was not a
/// covariance matrix at all.
std::vector<double> factor_psd(const SymMatrix& sigma);

/// Expected maximum coordinate of a centered Gaussian with covariance Sigma,
/// by Monte Carlo on the deterministic (seed, index) normal stream.
MCEstimate emax_gaussian_mc(const SymMatrix& sigma, std::int64_t samples, std::uint64_t seed);

/// Closed form for m = 2: E max(Y1, Y2) = sqrt(Var(Y1 - Y2) / (2 pi)).
double emax_gaussian_closed2(const SymMatrix& sigma);

struct IidResult {
    MCEstimate mc;
    std::optional<double> closed2;  // attached when m = 2
};

/// Large-sample i.i.d. complexity of the class under the measure.
IidResult iid_asymptotic(const FunctionClass& fc, const Measure& nu, std::int64_t samples,
                         std::uint64_t seed);

}  // namespace seqrad
