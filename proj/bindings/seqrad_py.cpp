#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "seqrad/bounds.hpp"
#include "seqrad/class_io.hpp"
#include "seqrad/control.hpp"
#include "seqrad/exact_dp.hpp"
#include "seqrad/gaussian_iid.hpp"
#include "seqrad/gheat.hpp"
#include "seqrad/json_out.hpp"
#include "seqrad/report.hpp"

namespace py = pybind11;

namespace {

seqrad::GammaSet gamma_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw seqrad::MalformedSpec("gamma must contain at least one row");
    return seqrad::GammaSet(rows.front().size(), rows);
}

seqrad::FunctionClass class_from_rows(const std::vector<std::vector<double>>& rows) {
    return seqrad::FunctionClass::from_rows(rows);
}

py::dict estimate_dict(const seqrad::MCEstimate& e) {
    py::dict out;
    out["mean"] = e.mean;
    out["std_err"] = e.std_err;
    out["samples"] = e.samples;
    out["seed"] = e.seed;
    return out;
}

}  // namespace

PYBIND11_MODULE(_seqrad, mod) {
    mod.doc() = "Sequential complexity of finite function classes: exact values, "
                "the large-sample grid scheme, the Gaussian baseline, and bounds";

    mod.def(
        "dp_value",
        [](const std::vector<std::vector<double>>& gamma_rows, int n) {
            seqrad::DPConfig cfg;
            cfg.n = n;
            return seqrad::dp_value(gamma_from_rows(gamma_rows), cfg);
        },
        py::arg("gamma"), py::arg("n"),
        "Exact value of the n-round game for the payoff rows (backward induction).");

    mod.def(
        "brute_force_value",
        [](const std::vector<std::vector<double>>& gamma_rows, int n) {
            return seqrad::brute_force_value(gamma_from_rows(gamma_rows), n);
        },
        py::arg("gamma"), py::arg("n"),
        "Exhaustive-enumeration oracle, n <= 3.");

    mod.def(
        "pde_value",
        [](const std::vector<std::vector<double>>& gamma_rows, double h, double dt,
           std::optional<double> L) {
            const auto gamma = gamma_from_rows(gamma_rows);
            const auto grid = seqrad::build_grid(gamma.m(), gamma, h, dt, L);
            return seqrad::solve_gheat(gamma, grid, {}).value_at_origin;
        },
        py::arg("gamma"), py::arg("h"), py::arg("dt"), py::arg("L") = std::nullopt,
        "Large-sample limit via the monotone grid scheme, evaluated at the origin.");

    mod.def(
        "iid_value",
        [](const std::vector<std::vector<double>>& function_rows,
           std::optional<std::vector<double>> weights, std::int64_t samples,
           std::uint64_t seed) {
            const auto fc = class_from_rows(function_rows);
            const auto nu = weights ? seqrad::Measure::from_weights(*weights)
                                    : seqrad::Measure::uniform(fc.z_count());
            const auto res = seqrad::iid_asymptotic(fc, nu, samples, seed);
            py::dict out = estimate_dict(res.mc);
            if (res.closed2) out["closed2"] = *res.closed2;
            return out;
        },
        py::arg("functions"), py::arg("weights") = std::nullopt,
        py::arg("samples") = 100000, py::arg("seed") = 42,
        "Gaussian baseline under a measure on the points (Monte Carlo, plus the "
        "closed form when there are exactly two functions).");

    mod.def(
        "separation_value",
        [](const std::vector<std::vector<double>>& function_rows) {
            return seqrad::separation_value(class_from_rows(function_rows)).a;
        },
        py::arg("functions"),
        "Largest worst-case-measure pairwise separation of the class.");

    mod.def("heat_upper_bound", &seqrad::heat_upper_bound, py::arg("m"), py::arg("b"),
            "Expected maximum of m independent centered Gaussians with scale b.");

    mod.def(
        "simulate_constant",
        [](const std::vector<std::vector<double>>& gamma_rows, std::size_t index,
           std::int64_t steps, std::int64_t paths, std::uint64_t seed) {
            const auto gamma = gamma_from_rows(gamma_rows);
            const auto est = seqrad::simulate_policy(gamma, seqrad::Policy::constant(index),
                                                     steps, paths, seed);
            return estimate_dict(est);
        },
        py::arg("gamma"), py::arg("index") = 0, py::arg("steps") = 256,
        py::arg("paths") = 100000, py::arg("seed") = 42,
        "Monte Carlo value of the constant policy that always picks one payoff row.");

    mod.def(
        "report_json",
        [](const std::string& path, std::optional<std::vector<int>> schedule, double h,
           double dt, std::int64_t samples, std::uint64_t seed) {
            const auto cls = seqrad::load_class_file(path);
            seqrad::ReportConfig cfg;
            if (schedule) cfg.schedule = *schedule;
            cfg.h = h;
            cfg.dt = dt;
            cfg.samples = samples;
            cfg.seed = seed;
            const auto out = seqrad::run_report(cls, cfg);
            py::dict result;
            result["json"] = seqrad::dump_json(out.doc);
            result["exit_code"] = out.exit_code;
            return result;
        },
        py::arg("path"), py::arg("schedule") = std::nullopt, py::arg("h") = 0.0,
        py::arg("dt") = 0.0, py::arg("samples") = 100000, py::arg("seed") = 42,
        "Full cross-validation report for a class file; returns the JSON text and "
        "the verdict exit code.");

    py::register_exception<seqrad::Error>(mod, "SeqradError");
}
