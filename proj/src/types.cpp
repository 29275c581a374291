#include "seqrad/types.hpp"

#include <cmath>
#include <cstring>
#include <unordered_set>

namespace seqrad {

namespace {

void check_finite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw NonFiniteEntry(std::string(what) + " contains a non-finite entry");
        }
    }
}

}  // namespace

FunctionClass::FunctionClass(std::size_t m, std::size_t z_count, std::vector<double> values_row_major)
    : m_(m), z_count_(z_count), values_(std::move(values_row_major)) {
    if (m_ == 0) throw MalformedSpec("function class must contain at least one function");
    if (z_count_ == 0) throw MalformedSpec("function class must be defined on at least one point");
    if (values_.size() != m_ * z_count_) {
        throw DimensionMismatch("function table size does not match m * |Z|");
    }
    check_finite(values_, "function table");
    for (double v : values_) bound_ = std::max(bound_, std::abs(v));
}

FunctionClass FunctionClass::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw MalformedSpec("function class must contain at least one function");
    const std::size_t z_count = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * z_count);
    for (const auto& row : rows) {
        if (row.size() != z_count) throw MalformedSpec("function rows must all have the same length");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return FunctionClass(rows.size(), z_count, std::move(flat));
}

std::vector<double> FunctionClass::column(std::size_t j) const {
    std::vector<double> col(m_);
    for (std::size_t i = 0; i < m_; ++i) col[i] = values_[i * z_count_ + j];
    return col;
}

namespace {

// Bitwise key of a vector, so that +0.0 and -0.0 (equal as doubles but distinct
// displacements never arise from parsing) still dedup consistently.
struct BitKey {
    std::string bytes;
    bool operator==(const BitKey&) const = default;
};

struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const { return std::hash<std::string>{}(k.bytes); }
};

BitKey key_of(const double* p, std::size_t m) {
    BitKey k;
    k.bytes.resize(m * sizeof(double));
    std::memcpy(k.bytes.data(), p, m * sizeof(double));
    return k;
}

}  // namespace

GammaSet::GammaSet(std::size_t m, const std::vector<std::vector<double>>& vectors) : m_(m) {
    if (m_ == 0) throw MalformedSpec("payoff vectors must have at least one coordinate");
    if (vectors.empty()) throw MalformedSpec("payoff set must contain at least one vector");
    std::unordered_set<BitKey, BitKeyHash> seen;
    for (const auto& v : vectors) {
        if (v.size() != m_) throw DimensionMismatch("payoff vectors must all have dimension m");
        check_finite(v, "payoff set");
        if (seen.insert(key_of(v.data(), m_)).second) {
            flat_.insert(flat_.end(), v.begin(), v.end());
            for (double x : v) bound_ = std::max(bound_, std::abs(x));
        }
    }
    count_ = flat_.size() / m_;
}

SymMatrix::SymMatrix(std::size_t m) : m_(m), tri_(m * (m + 1) / 2, 0.0) {
    if (m_ == 0) throw MalformedSpec("matrix dimension must be positive");
}

SymMatrix SymMatrix::identity(std::size_t m) {
    SymMatrix s(m);
    for (std::size_t i = 0; i < m; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix SymMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
    SymMatrix s(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw DimensionMismatch("matrix must be square");
        for (std::size_t j = 0; j <= i; ++j) s.set(i, j, rows[i][j]);
    }
    return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
    if (!std::isfinite(v)) throw NonFiniteEntry("matrix entry must be finite");
    tri_[tri_index(i, j)] = v;
}

Measure Measure::uniform(std::size_t n) {
    if (n == 0) throw MalformedSpec("measure needs at least one atom");
    Measure nu;
    nu.weights.assign(n, 1.0 / static_cast<double>(n));
    return nu;
}

Measure Measure::from_weights(std::vector<double> w) {
    if (w.empty()) throw MalformedSpec("measure needs at least one atom");
    double total = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0) throw MalformedSpec("measure weights must be finite and nonnegative");
        total += x;
    }
    if (total <= 0.0) throw MalformedSpec("measure weights must not all vanish");
    for (double& x : w) x /= total;
    Measure nu;
    nu.weights = std::move(w);
    return nu;
}

}  // namespace seqrad
