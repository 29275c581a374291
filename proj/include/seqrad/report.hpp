#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqrad/class_io.hpp"

namespace seqrad {

struct ReportConfig {
    std::vector<int> schedule;  // empty: powers of two up to n_max
    int n_max = 16;
    double h = 0.0;   // 0: pick by dimension
    double dt = 0.0;  // 0: h / 5
    std::optional<double> L;
    std::int64_t samples = 100'000;
    std::uint64_t seed = 42;
    std::optional<std::vector<double>> measure_weights;
    std::int64_t control_steps = 256;
    std::int64_t control_paths = 100'000;
    /// Adds wall-clock timings to the report; off by default because it breaks
    /// byte-identical output.
    bool timing = false;
};

struct ReportOutput {
    nlohmann::ordered_json doc;
    int exit_code = 0;  // 0 all PASS, 3 at least one FAIL
    std::string exact_csv;
    std::string pde_csv;
};

/// Grid spacing the report uses when none is requested; balances the fixed
/// 1e-2 comparison tolerances against node counts growing like h^-m.
double default_h(std::size_t m);

/// Run every module on the class and assemble the verdict report.
ReportOutput run_report(const LoadedClass& cls, const ReportConfig& cfg);

}  // namespace seqrad
