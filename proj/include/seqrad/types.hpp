#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqrad {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedSpec : public Error { public: using Error::Error; };
class NonFiniteEntry : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class StateExplosion : public Error { public: using Error::Error; };
class ScaleOverflow : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class NotPsd : public Error { public: using Error::Error; };
class TooFewSamples : public Error { public: using Error::Error; };
class NeedTwoFunctions : public Error { public: using Error::Error; };
class DimensionTooHigh : public Error { public: using Error::Error; };
class BudgetExceeded : public Error { public: using Error::Error; };
class BadPolicy : public Error { public: using Error::Error; };
class SlicesMissing : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// FunctionClass: m functions tabulated on a finite point set (m x z_count).
// Immutable after construction; entries validated finite.
// ---------------------------------------------------------------------------

class FunctionClass {
public:
    FunctionClass(std::size_t m, std::size_t z_count, std::vector<double> values_row_major);

    static FunctionClass from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t m() const { return m_; }
    std::size_t z_count() const { return z_count_; }

    double value(std::size_t i, std::size_t j) const { return values_[i * z_count_ + j]; }
    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * z_count_, z_count_};
    }
    /// Column j, i.e. the vector (f_1(z_j), ..., f_m(z_j)).
    std::vector<double> column(std::size_t j) const;

    /// Uniform bound b = max_{i,j} |values[i][j]|.
    double bound() const { return bound_; }

private:
    std::size_t m_ = 0;
    std::size_t z_count_ = 0;
    std::vector<double> values_;  // row-major
    double bound_ = 0.0;
};

// ---------------------------------------------------------------------------
// GammaSet: finite set of distinct payoff vectors in R^m.
// Duplicates (exact bit equality) are collapsed, keeping first occurrence.
// ---------------------------------------------------------------------------

class GammaSet {
public:
    GammaSet(std::size_t m, const std::vector<std::vector<double>>& vectors);

    std::size_t m() const { return m_; }
    std::size_t size() const { return count_; }

    std::span<const double> vec(std::size_t k) const { return {flat_.data() + k * m_, m_}; }

    /// b = max over vectors and coordinates of |gamma_i|.
    double bound() const { return bound_; }

private:
    std::size_t m_ = 0;
    std::size_t count_ = 0;
    std::vector<double> flat_;  // count x m, row per vector
    double bound_ = 0.0;
};

// ---------------------------------------------------------------------------
// SymMatrix: symmetric m x m matrix; the lower triangle is authoritative,
// so entries (i,j) and (j,i) are the same stored number by construction.
// ---------------------------------------------------------------------------

class SymMatrix {
public:
    explicit SymMatrix(std::size_t m);

    static SymMatrix identity(std::size_t m);
    static SymMatrix from_dense(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const { return m_; }

    double operator()(std::size_t i, std::size_t j) const { return tri_[tri_index(i, j)]; }
    void set(std::size_t i, std::size_t j, double v);

private:
    std::size_t tri_index(std::size_t i, std::size_t j) const {
        if (i < j) std::swap(i, j);
        return i * (i + 1) / 2 + j;
    }
    std::size_t m_ = 0;
    std::vector<double> tri_;  // lower triangle, row-major
};

// ---------------------------------------------------------------------------
// Measure: probability weights on the finite point set.
// ---------------------------------------------------------------------------

struct Measure {
    std::vector<double> weights;

    static Measure uniform(std::size_t n);
    /// Throws LengthMismatch / NonFiniteEntry / MalformedSpec on invalid input.
    static Measure from_weights(std::vector<double> w);

    std::size_t size() const { return weights.size(); }
};

// ---------------------------------------------------------------------------
// MCEstimate: Monte Carlo mean with its standard error and provenance.
// ---------------------------------------------------------------------------

struct MCEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// ValueSlice: explicit (point, value) pairs; the export/test view of a value
// function restricted to a finite state set or grid level.
// ---------------------------------------------------------------------------

struct ValueSlice {
    std::vector<std::vector<double>> points;
    std::vector<double> values;
};

}  // namespace seqrad
