#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "seqrad/types.hpp"

namespace seqrad {

/// Largest coordinate of x. 1-Lipschitz in the sup norm and additive under
/// diagonal shifts: max(x + c*1) = max(x) + c.
double max_coordinate(std::span<const double> x);

/// Nonlinearity of the G-heat equation: (1/2) max over gamma of gamma' S gamma.
/// Positively homogeneous and convex in S, monotone in the PSD order.
double hamiltonian(const SymMatrix& s, const GammaSet& gamma);

/// Uniform coordinate bound b of the payoff set.
double envelope_bound(const GammaSet& gamma);

/// Payoff set of a function class: deduplicated columns (f_1(z),...,f_m(z)).
GammaSet gamma_of(const FunctionClass& fc);

/// View a payoff set as a function class whose point set is the set itself
/// (column j = vector j). Used when only "gamma" was supplied.
FunctionClass columns_as_class(const GammaSet& gamma);

struct LoadedClass {
    std::string label;
    std::optional<FunctionClass> functions;  // present iff the input had "functions"
    GammaSet gamma;

    /// FunctionClass for measure-dependent computations (covariance, LP).
    FunctionClass as_function_class() const {
        return functions ? *functions : columns_as_class(gamma);
    }
};

/// Parse the input document: a JSON object with exactly one of "functions"
/// (m arrays of |Z| numbers) or "gamma" (array of m-element arrays), plus an
/// optional "label". Throws MalformedSpec / NonFiniteEntry.
LoadedClass load_class(const nlohmann::json& doc);
LoadedClass load_class_file(const std::string& path);

}  // namespace seqrad
