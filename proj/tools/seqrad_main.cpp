#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqrad/bounds.hpp"
#include "seqrad/class_io.hpp"
#include "seqrad/control.hpp"
#include "seqrad/exact_dp.hpp"
#include "seqrad/gaussian_iid.hpp"
#include "seqrad/gheat.hpp"
#include "seqrad/json_out.hpp"
#include "seqrad/report.hpp"

namespace {

using seqrad::dump_json;
using ojson = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw seqrad::Error("cannot open output file: " + path);
    out << content;
    if (!out) throw seqrad::Error("write failed: " + path);
}

ojson estimate_json(const seqrad::MCEstimate& e) {
    return ojson{{"mean", e.mean}, {"std_err", e.std_err}, {"samples", e.samples}, {"seed", e.seed}};
}

seqrad::MemoMode parse_mode(const std::string& name) {
    if (name == "exact-integer") return seqrad::MemoMode::ExactInteger;
    if (name == "float-hash") return seqrad::MemoMode::FloatHash;
    if (name == "none") return seqrad::MemoMode::None;
    throw CLI::ValidationError("--mode", "must be exact-integer, float-hash, or none");
}

ojson strategy_json(const seqrad::StrategyNode& node) {
    ojson out{{"gamma", static_cast<std::int64_t>(node.gamma_index)}};
    if (!node.children.empty()) {
        out["plus"] = strategy_json(node.children[0]);
        out["minus"] = strategy_json(node.children[1]);
    }
    return out;
}

std::string csv17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CommonArgs {
    std::string input;
    std::string out;
};

int run(int argc, char** argv) {
    CLI::App app{"Sequential complexity of a finite function class: exact values, "
                 "large-sample PDE limit, Gaussian baseline, bounds, and simulation"};
    app.set_config("--config");
    app.set_version_flag("--version", "seqrad 1.0.0");
    app.require_subcommand(1);
    // --h is a real option below, so help must not claim the short -h.
    app.set_help_flag("--help", "print help and exit");

    // exact ------------------------------------------------------------
    auto* exact = app.add_subcommand("exact", "Exact value at finite n by backward induction");
    CommonArgs exact_args;
    int exact_n = 8;
    std::vector<int> exact_schedule;
    std::string exact_mode = "exact-integer";
    std::int64_t exact_budget = 100'000'000;
    std::string strategy_path;
    exact->add_option("--input", exact_args.input, "class description (JSON)")->required();
    exact->add_option("--n", exact_n, "single round count");
    exact->add_option("--schedule", exact_schedule, "ascending list of round counts")->delimiter(',');
    exact->add_option("--mode", exact_mode, "memoization: exact-integer, float-hash, none");
    exact->add_option("--budget", exact_budget, "evaluation budget");
    exact->add_option("--strategy", strategy_path, "dump the chosen-payoff tree (JSON) here");
    exact->add_option("--out", exact_args.out, "write the CSV table here instead of stdout");

    // pde ----------------------------------------------------------------
    auto* pde = app.add_subcommand("pde", "Large-sample limit by the monotone grid scheme");
    CommonArgs pde_args;
    double pde_h = 0.0, pde_dt = 0.0;
    std::optional<double> pde_L;
    bool pde_refine = false;
    bool pde_csv = false;
    bool pde_reference = false;
    std::vector<double> dump_times;
    std::string slices_path;
    pde->add_option("--input", pde_args.input, "class description (JSON)")->required();
    pde->add_option("--h", pde_h, "grid spacing (default picked by dimension)");
    pde->add_option("--dt", pde_dt, "time step (default h/5, snapped to 1/steps)");
    pde->add_option("--L", pde_L, "domain half-width (default max(6b, 8h))");
    pde->add_flag("--refine", pde_refine, "also solve at (h/2, dt/2) and extrapolate");
    pde->add_flag("--csv", pde_csv, "emit h,dt,value rows instead of JSON");
    pde->add_flag("--reference", pde_reference,
                  "solve the independent-coordinate heat flow instead of the payoff-set equation");
    pde->add_option("--dump-times", dump_times, "time levels whose slices to dump")->delimiter(',');
    pde->add_option("--slices", slices_path, "CSV path for the slice dump");
    pde->add_option("--out", pde_args.out, "write the result here instead of stdout");

    // iid ----------------------------------------------------------------
    auto* iid = app.add_subcommand("iid", "Gaussian baseline under a measure on the points");
    CommonArgs iid_args;
    std::int64_t iid_samples = 100'000;
    std::uint64_t iid_seed = 42;
    std::vector<double> iid_measure;
    iid->add_option("--input", iid_args.input, "class description (JSON)")->required();
    iid->add_option("--samples", iid_samples, "Monte Carlo sample count");
    iid->add_option("--seed", iid_seed, "generator seed");
    iid->add_option("--measure", iid_measure, "weights over the points (default uniform)")
        ->delimiter(',');
    iid->add_option("--out", iid_args.out, "write the result here instead of stdout");

    // bounds -------------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "Separation program and the sandwich bounds");
    CommonArgs bounds_args;
    std::optional<double> bounds_estimate;
    double bounds_tol = 1e-2;
    bounds->add_option("--input", bounds_args.input, "class description (JSON)")->required();
    bounds->add_option("--estimate", bounds_estimate, "estimate to check against the bounds");
    bounds->add_option("--tolerance", bounds_tol, "slack for the verdict");
    bounds->add_option("--out", bounds_args.out, "write the result here instead of stdout");

    // control ------------------------------------------------------------
    auto* control = app.add_subcommand("control", "Simulate an adapted policy on Brownian paths");
    CommonArgs control_args;
    std::string policy_name = "constant";
    std::size_t gamma_index = 0;
    std::int64_t control_steps = 256;
    std::int64_t control_paths = 100'000;
    std::uint64_t control_seed = 42;
    double control_h = 0.0, control_dt = 0.0;
    control->add_option("--input", control_args.input, "class description (JSON)")->required();
    control->add_option("--policy", policy_name, "constant or greedy");
    control->add_option("--gamma-index", gamma_index, "payoff index for the constant policy");
    control->add_option("--steps", control_steps, "Euler steps per path");
    control->add_option("--paths", control_paths, "simulated paths");
    control->add_option("--seed", control_seed, "generator seed");
    control->add_option("--h", control_h, "grid spacing for the greedy policy's solve");
    control->add_option("--dt", control_dt, "time step for the greedy policy's solve");
    control->add_option("--out", control_args.out, "write the result here instead of stdout");

    // report ---------------------------------------------------------------
    auto* report = app.add_subcommand("report", "Run every module and emit the verdict report");
    CommonArgs report_args;
    seqrad::ReportConfig rcfg;
    std::vector<double> report_measure;
    report->add_option("--input", report_args.input, "class description (JSON)")->required();
    report->add_option("--n", rcfg.n_max, "largest power-of-two round count");
    report->add_option("--schedule", rcfg.schedule, "explicit ascending round counts")->delimiter(',');
    report->add_option("--h", rcfg.h, "grid spacing");
    report->add_option("--dt", rcfg.dt, "time step");
    report->add_option("--L", rcfg.L, "domain half-width");
    report->add_option("--samples", rcfg.samples, "Monte Carlo sample count");
    report->add_option("--seed", rcfg.seed, "generator seed");
    report->add_option("--measure", report_measure, "weights over the points")->delimiter(',');
    report->add_option("--steps", rcfg.control_steps, "Euler steps per simulated path");
    report->add_option("--paths", rcfg.control_paths, "simulated paths");
    report->add_flag("--timing", rcfg.timing, "include wall-clock timings (breaks byte determinism)");
    report->add_option("--out", report_args.out,
                       "report JSON path; CSV tables land beside it (default stdout, no CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*exact) {
        const auto cls = seqrad::load_class_file(exact_args.input);
        std::vector<int> schedule = exact_schedule.empty() ? std::vector<int>{exact_n} : exact_schedule;
        for (std::size_t i = 1; i < schedule.size(); ++i) {
            if (schedule[i] <= schedule[i - 1]) {
                std::cerr << "seqrad: --schedule must be strictly ascending\n";
                return 2;
            }
        }
        seqrad::DPConfig cfg;
        cfg.memo_mode = parse_mode(exact_mode);
        cfg.node_budget = exact_budget;
        const auto rows = seqrad::convergence_table(cls.gamma, schedule, cfg);
        bool any = false;
        for (const auto& row : rows) {
            if (row.skipped) {
                std::cerr << "seqrad: n=" << row.n << " skipped: " << row.reason << "\n";
            } else {
                any = true;
            }
            if (!row.skipped && row.n > 16 && cls.gamma.size() > 1) {
                std::cerr << "seqrad: warning: n=" << row.n
                          << " with several payoff vectors may be expensive\n";
            }
        }
        write_text(exact_args.out, seqrad::convergence_csv(rows));
        if (!strategy_path.empty()) {
            const auto tree = seqrad::strategy_tree(cls.gamma, schedule.back());
            write_text(strategy_path, dump_json(strategy_json(tree)));
        }
        return any ? 0 : 1;
    }

    if (*pde) {
        const auto cls = seqrad::load_class_file(pde_args.input);
        const double h = pde_h > 0.0 ? pde_h : seqrad::default_h(cls.gamma.m());
        const double dt = pde_dt > 0.0 ? pde_dt : h / 5.0;
        const auto grid = seqrad::build_grid(cls.gamma.m(), cls.gamma, h, dt, pde_L);
        seqrad::SolveOptions opts;
        opts.refine = pde_refine;
        opts.retain_slices = !dump_times.empty();
        const auto result = pde_reference
                                ? seqrad::solve_heat_reference(cls.gamma.bound(), grid, opts)
                                : seqrad::solve_gheat(cls.gamma, grid, opts);
        if (!dump_times.empty()) {
            if (slices_path.empty()) {
                std::cerr << "seqrad: --dump-times needs --slices PATH\n";
                return 2;
            }
            std::string csv = "t";
            for (std::size_t a = 0; a < grid.m; ++a) csv += ",x" + std::to_string(a + 1);
            csv += ",value\n";
            std::size_t multi[4];
            for (double t : dump_times) {
                const auto r = static_cast<std::size_t>(
                    std::clamp<long long>(std::llround(t / grid.dt), 0,
                                          static_cast<long long>(grid.t_steps)));
                const auto& slice = result.retained[r];
                const double t_actual = static_cast<double>(r) * grid.dt;
                for (std::size_t node = 0; node < grid.total_nodes; ++node) {
                    grid.unflatten(node, {multi, grid.m});
                    csv += csv17(t_actual);
                    for (std::size_t a = 0; a < grid.m; ++a) csv += "," + csv17(grid.coord(multi[a]));
                    csv += "," + csv17(slice[node]) + "\n";
                }
            }
            write_text(slices_path, csv);
        }
        if (pde_csv) {
            std::string csv = "h,dt,value\n";
            csv += csv17(result.h) + "," + csv17(result.dt) + "," + csv17(result.value_at_origin) + "\n";
            if (result.refined_value) {
                csv += csv17(result.h / 2) + "," + csv17(result.dt / 2) + "," +
                       csv17(*result.refined_value) + "\n";
            }
            write_text(pde_args.out, csv);
        } else {
            ojson doc{{"h", result.h},
                      {"dt", result.dt},
                      {"L", grid.extent()},
                      {"t_steps", static_cast<std::int64_t>(grid.t_steps)},
                      {"value", result.value_at_origin}};
            if (result.refined_value) {
                doc["refined_value"] = *result.refined_value;
                doc["richardson"] = *result.richardson_estimate;
            }
            write_text(pde_args.out, dump_json(doc));
        }
        return 0;
    }

    if (*iid) {
        const auto cls = seqrad::load_class_file(iid_args.input);
        const auto fc = cls.as_function_class();
        seqrad::Measure nu = seqrad::Measure::uniform(fc.z_count());
        if (!iid_measure.empty()) {
            if (iid_measure.size() != fc.z_count()) {
                std::cerr << "seqrad: --measure needs exactly " << fc.z_count() << " weights\n";
                return 2;
            }
            nu = seqrad::Measure::from_weights(iid_measure);
        }
        const auto result = seqrad::iid_asymptotic(fc, nu, iid_samples, iid_seed);
        ojson doc = estimate_json(result.mc);
        if (result.closed2) doc["closed2"] = *result.closed2;
        doc["measure"] = nu.weights;
        write_text(iid_args.out, dump_json(doc));
        return 0;
    }

    if (*bounds) {
        const auto cls = seqrad::load_class_file(bounds_args.input);
        const auto fc = cls.as_function_class();
        ojson doc;
        int code = 0;
        if (bounds_estimate) {
            const auto rep = seqrad::sandwich_check(fc, *bounds_estimate, bounds_tol);
            doc = ojson{{"a_value", rep.a_value},
                        {"lower", rep.lower},
                        {"upper_logm", rep.upper_logm},
                        {"upper_heat", rep.upper_heat},
                        {"heat_bound_enforced", rep.heat_bound_enforced},
                        {"nu_star", rep.argmax_measure.weights},
                        {"estimate", *bounds_estimate},
                        {"tolerance", rep.tolerance},
                        {"verdict", rep.pass ? "PASS" : "FAIL"},
                        {"note", rep.note}};
            code = rep.pass ? 0 : 3;
        } else {
            const auto sep = seqrad::separation_value(fc);
            const double b = fc.bound();
            const double root_log_m = std::sqrt(std::log(static_cast<double>(fc.m())));
            doc = ojson{{"a_value", sep.a},
                        {"lower", sep.a * root_log_m / 17.0},
                        {"upper_logm", std::numbers::sqrt2 * b * root_log_m},
                        {"upper_heat", seqrad::heat_upper_bound(fc.m(), b)},
                        {"heat_bound_enforced", false},
                        {"nu_star", sep.nu_star.weights},
                        {"note", seqrad::kHeatReferenceNote}};
        }
        write_text(bounds_args.out, dump_json(doc));
        return code;
    }

    if (*control) {
        const auto cls = seqrad::load_class_file(control_args.input);
        seqrad::Policy policy;
        ojson meta;
        if (policy_name == "constant") {
            policy = seqrad::Policy::constant(gamma_index);
            meta["policy"] = "constant";
            meta["gamma_index"] = static_cast<std::int64_t>(gamma_index);
        } else if (policy_name == "greedy") {
            const double h = control_h > 0.0 ? control_h : seqrad::default_h(cls.gamma.m());
            const double dt = control_dt > 0.0 ? control_dt : h / 5.0;
            const auto grid = seqrad::build_grid(cls.gamma.m(), cls.gamma, h, dt);
            seqrad::SolveOptions opts;
            opts.retain_slices = true;
            auto solved = std::make_shared<seqrad::SolveResult>(seqrad::solve_gheat(cls.gamma, grid, opts));
            meta["policy"] = "greedy";
            meta["solver_value"] = solved->value_at_origin;
            policy = seqrad::greedy_policy_from_solution(cls.gamma, std::move(solved));
        } else {
            std::cerr << "seqrad: --policy must be constant or greedy\n";
            return 2;
        }
        const auto est = seqrad::simulate_policy(cls.gamma, policy, control_steps, control_paths,
                                                 control_seed);
        ojson doc = estimate_json(est);
        for (auto& [k, v] : meta.items()) doc[k] = v;
        write_text(control_args.out, dump_json(doc));
        return 0;
    }

    // report
    const auto cls = seqrad::load_class_file(report_args.input);
    if (!report_measure.empty()) {
        if (report_measure.size() != cls.as_function_class().z_count()) {
            std::cerr << "seqrad: --measure needs exactly "
                      << cls.as_function_class().z_count() << " weights\n";
            return 2;
        }
        rcfg.measure_weights = report_measure;
    }
    const auto result = seqrad::run_report(cls, rcfg);
    write_text(report_args.out, dump_json(result.doc));
    if (!report_args.out.empty() && report_args.out != "-") {
        std::string stem = report_args.out;
        if (const auto dot = stem.rfind(".json"); dot != std::string::npos && dot == stem.size() - 5) {
            stem.resize(dot);
        }
        if (!result.exact_csv.empty()) write_text(stem + "_exact.csv", result.exact_csv);
        if (!result.pde_csv.empty()) write_text(stem + "_pde.csv", result.pde_csv);
    }
    for (const auto& v : result.doc["verdicts"]) {
        std::cerr << v["name"].get<std::string>() << ": " << v["status"].get<std::string>() << "\n";
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const seqrad::Error& e) {
        std::cerr << "seqrad: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "seqrad: unexpected failure: " << e.what() << "\n";
        return 1;
    }
}
