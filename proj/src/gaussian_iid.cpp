#include "seqrad/gaussian_iid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "seqrad/rng.hpp"

namespace seqrad {

SymMatrix covariance(const FunctionClass& fc, const Measure& nu) {
    if (nu.size() != fc.z_count()) {
        throw LengthMismatch("measure must have one weight per point of the class");
    }
    const std::size_t m = fc.m();
    std::vector<double> acc(m * m, 0.0);
    for (std::size_t j = 0; j < fc.z_count(); ++j) {
        const double w = nu.weights[j];
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double wi = w * fc.value(i, j);
            for (std::size_t k = 0; k <= i; ++k) acc[i * m + k] += wi * fc.value(k, j);
        }
    }
    SymMatrix sigma(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k <= i; ++k) sigma.set(i, k, acc[i * m + k]);
    }
    return sigma;
}

std::vector<double> factor_psd(const SymMatrix& sigma) {
    const std::size_t m = sigma.dim();
    Eigen::MatrixXd s(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sigma(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    Eigen::VectorXd lambda = solver.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < -1e-8) {
            throw NotPsd("matrix has eigenvalue " + std::to_string(lambda[i]) +
                         ", below the -1e-8 clip threshold");
        }
        lambda[i] = std::sqrt(std::max(0.0, lambda[i]));
    }
    Eigen::MatrixXd a = solver.eigenvectors() * lambda.asDiagonal();
    std::vector<double> out(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out[i * m + j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    return out;
}

MCEstimate emax_gaussian_mc(const SymMatrix& sigma, std::int64_t samples, std::uint64_t seed) {
    if (samples < 1000) throw TooFewSamples("expected-maximum estimation needs at least 1000 samples");
    const std::size_t m = sigma.dim();
    const std::vector<double> a = factor_psd(sigma);
    const NormalStream normals(seed);
    std::vector<double> xi(m);
    return mc_estimate(samples, seed, [&](std::int64_t i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * m;
        for (std::size_t j = 0; j < m; ++j) xi[j] = normals(base + j);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            double y = 0.0;
            for (std::size_t j = 0; j < m; ++j) y += a[r * m + j] * xi[j];
            best = std::max(best, y);
        }
        return best;
    });
}

double emax_gaussian_closed2(const SymMatrix& sigma) {
    if (sigma.dim() != 2) throw DimensionMismatch("closed form is for m = 2 only");
    const double s11 = sigma(0, 0);
    const double s22 = sigma(1, 1);
    const double s12 = sigma(0, 1);
    if (s11 < -1e-9 || s22 < -1e-9 || s11 * s22 - s12 * s12 < -1e-8 * std::max(1.0, s11 * s22)) {
        throw NotPsd("2x2 matrix is not positive semidefinite");
    }
    const double var_diff = std::max(0.0, s11 + s22 - 2.0 * s12);
    return std::sqrt(var_diff / (2.0 * std::numbers::pi));
}

IidResult iid_asymptotic(const FunctionClass& fc, const Measure& nu, std::int64_t samples,
                         std::uint64_t seed) {
    const SymMatrix sigma = covariance(fc, nu);
    IidResult result;
    result.mc = emax_gaussian_mc(sigma, samples, seed);
    if (fc.m() == 2) result.closed2 = emax_gaussian_closed2(sigma);
    return result;
}

}  // namespace seqrad
