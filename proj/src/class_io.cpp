#include "seqrad/class_io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace seqrad {

double max_coordinate(std::span<const double> x) {
    if (x.empty()) throw MalformedSpec("max over an empty vector");
    return *std::max_element(x.begin(), x.end());
}

double hamiltonian(const SymMatrix& s, const GammaSet& gamma) {
    if (s.dim() != gamma.m()) throw DimensionMismatch("matrix dimension must match payoff dimension");
    const std::size_t m = s.dim();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto g = gamma.vec(k);
        double q = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            // Off-diagonal terms appear twice in gamma' S gamma.
            for (std::size_t j = 0; j < i; ++j) q += 2.0 * g[i] * s(i, j) * g[j];
            q += g[i] * s(i, i) * g[i];
        }
        best = std::max(best, q);
    }
    return 0.5 * best;
}

double envelope_bound(const GammaSet& gamma) { return gamma.bound(); }

GammaSet gamma_of(const FunctionClass& fc) {
    std::vector<std::vector<double>> cols;
    cols.reserve(fc.z_count());
    for (std::size_t j = 0; j < fc.z_count(); ++j) cols.push_back(fc.column(j));
    return GammaSet(fc.m(), cols);
}

FunctionClass columns_as_class(const GammaSet& gamma) {
    std::vector<double> flat(gamma.m() * gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const auto v = gamma.vec(k);
        for (std::size_t i = 0; i < gamma.m(); ++i) flat[i * gamma.size() + k] = v[i];
    }
    return FunctionClass(gamma.m(), gamma.size(), std::move(flat));
}

namespace {

std::vector<std::vector<double>> parse_matrix(const nlohmann::json& arr, const char* what) {
    if (!arr.is_array() || arr.empty()) {
        throw MalformedSpec(std::string("\"") + what + "\" must be a nonempty array of arrays");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(arr.size());
    for (const auto& row : arr) {
        if (!row.is_array() || row.empty()) {
            throw MalformedSpec(std::string("\"") + what + "\" must be a nonempty array of arrays");
        }
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& v : row) {
            if (!v.is_number()) {
                throw MalformedSpec(std::string("entries of \"") + what + "\" must be numbers");
            }
            r.push_back(v.get<double>());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

LoadedClass load_class(const nlohmann::json& doc) {
    if (!doc.is_object()) throw MalformedSpec("input must be a JSON object");
    const bool has_functions = doc.contains("functions");
    const bool has_gamma = doc.contains("gamma");
    if (has_functions == has_gamma) {
        throw MalformedSpec("input must contain exactly one of \"functions\" or \"gamma\"");
    }
    std::string label;
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw MalformedSpec("\"label\" must be a string");
        label = doc["label"].get<std::string>();
    }
    if (has_functions) {
        auto rows = parse_matrix(doc["functions"], "functions");
        auto fc = FunctionClass::from_rows(rows);
        auto gs = gamma_of(fc);
        return LoadedClass{std::move(label), std::move(fc), std::move(gs)};
    }
    auto rows = parse_matrix(doc["gamma"], "gamma");
    // Rows are vectors of R^m, so every row fixes m.
    const std::size_t m = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != m) throw MalformedSpec("\"gamma\" vectors must all have the same dimension");
    }
    return LoadedClass{std::move(label), std::nullopt, GammaSet(m, rows)};
}

LoadedClass load_class_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedSpec("cannot open input file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedSpec(std::string("input is not valid JSON: ") + e.what());
    }
    return load_class(doc);
}

}  // namespace seqrad
