// runner.hpp — wires the modules into reproducible experiments: scenario
// execution, detuning sweeps, hole-placement sensitivity, CSV artifacts.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "revivals/modes.hpp"
#include "revivals/scenario.hpp"

namespace revivals::cli {

struct RunOptions {
    std::string out_dir;   // wins over scenario.out_dir and $REVIVALS_OUT
    std::string solver;    // override, empty = scenario's
    int threads = 1;
    bool quiet = false;
};

struct RunReport {
    std::string out_dir;
    std::map<std::string, std::string> trajectory_files; // route -> path
    double ode_volterra_deviation = -1.0;  // max |ΔA| / max |A|; -1 if not run
    double laplace_ode_deviation = -1.0;   // max |ΔN| / max N; -1 if not run
    std::size_t pulse_count = 0;
    std::size_t pulses_above_barrier = 0;
    std::vector<modes::Peak> peaks;
    std::map<std::string, double> wall_s;
};

// Pipeline: spectral -> (modes | laplace as configured) -> dynamics ->
// metrics; writes spectrum.csv, peaks.csv/modes.csv, trajectory*.csv,
// pulses.csv, laplace.csv, report.json. Identical scenarios produce
// byte-identical CSV output. With solver=all, an ODE/Volterra deviation
// above 1e-5 raises numeric_error after the artifacts are written.
RunReport run_scenario(const Scenario& s, const RunOptions& opts = {});

// Detuning sweep per the scenario's sweep block; one modes CSV per coupling.
RunReport run_sweep(const Scenario& s, const RunOptions& opts = {});

struct SensitivityRow {
    double shift_fraction;
    double late_envelope;       // max peak |A|² with t > 2 us
    double ratio_vs_unshifted;
};

// Displace auto-placed hole centers by each fraction of their distance to
// the cavity and compare the late-time envelope against optimal placement.
std::vector<SensitivityRow>
sensitivity_study(const Scenario& s, const std::vector<double>& fractions,
                  const RunOptions& opts = {});

std::string default_out_dir(const Scenario& s, const RunOptions& opts);

} // namespace revivals::cli
