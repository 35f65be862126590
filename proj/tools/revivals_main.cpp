// revivals_main.cpp — command-line scenario runner.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric/validation failure.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "revivals/errors.hpp"
#include "revivals/kernels.hpp"
#include "revivals/runner.hpp"

using namespace revivals;

namespace {

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

void print_report(const cli::RunReport& r) {
    std::printf("artifacts: %s\n", r.out_dir.c_str());
    for (const auto& [route, file] : r.trajectory_files)
        std::printf("  %-10s %s\n", route.c_str(), file.c_str());
    if (r.ode_volterra_deviation >= 0.0)
        std::printf("ode/volterra max deviation: %.3e\n",
                    r.ode_volterra_deviation);
    if (r.laplace_ode_deviation >= 0.0)
        std::printf("laplace/ode max deviation:  %.3e\n",
                    r.laplace_ode_deviation);
    if (r.pulse_count > 0)
        std::printf("pulses: %zu (%zu above the e^{-kappa t} barrier)\n",
                    r.pulse_count, r.pulses_above_barrier);
    for (const auto& [stage, secs] : r.wall_s)
        std::printf("  %-18s %.2f s\n", stage.c_str(), secs);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"revivals — cavity + comb-shaped spin-ensemble simulator"};
    app.require_subcommand(1);

    std::string scenario_arg;
    cli::RunOptions opts;

    auto* run = app.add_subcommand("run", "Run a scenario end to end");
    run->add_option("scenario", scenario_arg,
                    "built-in scenario name or path to a JSON file")
        ->required();
    run->add_option("--out", opts.out_dir, "output directory");
    run->add_option("--solver", opts.solver,
                    "override solver: ode|volterra|laplace|all");
    run->add_option("--threads", opts.threads, "worker threads for sweeps");

    auto* sweep = app.add_subcommand("sweep", "Run a detuning sweep");
    sweep->add_option("scenario", scenario_arg,
                      "scenario with a sweep block (e.g. fig3sweep)")
        ->required();
    sweep->add_option("--out", opts.out_dir, "output directory");
    sweep->add_option("--threads", opts.threads, "worker threads");

    std::vector<double> shifts{0.03, -0.03, 0.10, -0.10};
    auto* sens = app.add_subcommand(
        "sensitivity", "Displace auto holes and compare late-time envelopes");
    sens->add_option("scenario", scenario_arg,
                     "scenario with auto holes (e.g. fig4)")
        ->required();
    sens->add_option("--shifts", shifts,
                     "shift fractions of the hole-to-cavity distance");
    sens->add_option("--out", opts.out_dir, "output directory");

    auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // bad invocation is a configuration error
    }

    if (list->parsed()) {
        for (const std::string& name : cli::builtin_scenario_names())
            std::printf("%-12s %s\n", name.c_str(),
                        cli::builtin_scenario_summary(name).c_str());
        return 0;
    }

    return guarded([&] {
        const cli::Scenario s = cli::resolve_scenario(scenario_arg);
        std::printf("kernels: %s\n",
                    kern::backend_name(kern::active_backend()));
        if (sweep->parsed()) {
            print_report(cli::run_sweep(s, opts));
        } else if (sens->parsed()) {
            const auto rows = cli::sensitivity_study(s, shifts, opts);
            std::printf("%-16s %-16s %s\n", "shift_fraction", "late_envelope",
                        "ratio_vs_unshifted");
            for (const auto& r : rows)
                std::printf("%-16g %-16.6e %.6f\n", r.shift_fraction,
                            r.late_envelope, r.ratio_vs_unshifted);
        } else {
            print_report(cli::run_scenario(s, opts));
        }
    });
}
