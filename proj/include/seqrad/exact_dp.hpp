#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqrad/types.hpp"

namespace seqrad {

enum class MemoMode { ExactInteger, FloatHash, None };

struct DPConfig {
    int n = 1;
    MemoMode memo_mode = MemoMode::ExactInteger;
    /// 0 = infer the common denominator from the inputs (capped at 10^6).
    std::int64_t scale_denominator = 0;
    /// Budget on continuation-value evaluations (states times payoff choices).
    std::int64_t node_budget = 100'000'000;
};

struct DPResult {
    double value = 0.0;
    MemoMode mode_used = MemoMode::ExactInteger;
    std::int64_t scale_denominator = 1;  // meaningful in exact-integer mode
    std::int64_t evaluations = 0;
    /// Exact-integer keying failed; states were quantized doubles instead.
    bool float_keyed = false;
    /// n > 16 with more than one payoff vector: cost may be exponential.
    bool size_warning = false;
};

/// One backward-induction step at state x: the best half-sum of continuation
/// values at x +- gamma/sqrt(n) over all gamma, and the argmax index (lowest
/// index wins ties).
std::pair<double, std::size_t> backward_step(
    const std::function<double(std::span<const double>)>& next,
    std::span<const double> x, const GammaSet& gamma, int n);

/// Value of the n-round game started at the origin: the exact complexity at n.
DPResult dp_value_full(const GammaSet& gamma, const DPConfig& cfg);
double dp_value(const GammaSet& gamma, const DPConfig& cfg);

/// Exhaustive enumeration of every adapted assignment of payoff vectors to the
/// sign-history tree, n <= 3 only. The independent oracle for dp_value.
double brute_force_value(const GammaSet& gamma, int n);

struct ConvergenceRow {
    int n = 0;
    double value = 0.0;
    std::optional<double> delta;  // vs the previous computed row
    bool skipped = false;
    std::string reason;
};

/// dp_value across an ascending schedule of n; rows whose computation throws
/// are marked skipped with the reason instead of aborting the table.
std::vector<ConvergenceRow> convergence_table(const GammaSet& gamma,
                                              const std::vector<int>& schedule,
                                              const DPConfig& base = {});

/// CSV rows "n,value,delta" (header included, empty delta on the first row).
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Optimal adapted strategy as a binary tree over sign histories: gamma_index
/// is the payoff chosen at the node, children[0]/children[1] follow the +1/-1
/// sign. Leaves (depth n) carry no choice and have gamma_index = 0.
struct StrategyNode {
    std::size_t gamma_index = 0;
    std::vector<StrategyNode> children;  // empty at leaves, else {plus, minus}
};

/// Explicit optimal strategy for the n-round game, n <= 10.
StrategyNode strategy_tree(const GammaSet& gamma, int n);

}  // namespace seqrad
