#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "seqrad/types.hpp"

namespace seqrad {

/// Counter-based generator: the ctr-th output of a splitmix64 stream seeded at
/// `seed`, computed directly so each draw is a pure function of (seed, ctr).
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t ctr) {
    std::uint64_t z = seed + (ctr + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform draw in the open interval (0,1); never 0, so log() is safe.
inline double uniform01(std::uint64_t seed, std::uint64_t ctr) {
    return (static_cast<double>(mix64(seed, ctr) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal stream. Draw i depends only on (seed, i); Box-Muller pairs
/// (2k, 2k+1) share their two underlying uniforms, so any partitioning of the
/// index range reproduces the same numbers.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : seed_(seed) {}

    double operator()(std::uint64_t index) const {
        const std::uint64_t pair = index >> 1;
        const double u1 = uniform01(seed_, 2 * pair);
        const double u2 = uniform01(seed_, 2 * pair + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

/// Samples are summed in fixed blocks combined in block order, so the reduction
/// result does not depend on how sample evaluation is scheduled.
inline constexpr std::int64_t kReductionBlock = 8192;

template <typename ValueAt>
MCEstimate mc_estimate(std::int64_t samples, std::uint64_t seed, ValueAt&& value_at) {
    if (samples < 2) throw TooFewSamples("Monte Carlo needs at least 2 samples");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::int64_t block = 0; block < samples; block += kReductionBlock) {
        const std::int64_t end = std::min(samples, block + kReductionBlock);
        double s = 0.0;
        double s2 = 0.0;
        for (std::int64_t i = block; i < end; ++i) {
            const double v = value_at(i);
            s += v;
            s2 += v * v;
        }
        sum += s;
        sum_sq += s2;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    MCEstimate est;
    est.mean = mean;
    est.std_err = std::sqrt(var / n);
    est.samples = samples;
    est.seed = seed;
    return est;
}

}  // namespace seqrad
