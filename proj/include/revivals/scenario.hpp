// scenario.hpp — declarative experiment descriptions: the reference
// parameter card, built-in scenarios, and JSON (de)serialization with strict
// schema checking.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "revivals/dynamics.hpp"
#include "revivals/spectral.hpp"

namespace revivals::cli {

enum class Solver { ode, volterra, laplace, all };
const char* solver_name(Solver s);

// Reference hole width: 0.47 MHz is the Gaussian width parameter of the
// notch exp(-(ω-ω_j)²/Δ_h²) (same Δ convention as the q-Gaussian lines),
// so FWHM = 2 sqrt(ln 2) · 0.47 MHz.
inline constexpr double default_hole_fwhm_mhz = 0.782601334488236;

struct HoleEntry {
    double center_mhz_rel_cavity;
    double fwhm_mhz;
    double depth;
    bool operator==(const HoleEntry&) const = default;
};

struct HolesNone {
    bool operator==(const HolesNone&) const = default;
};
struct HolesExplicit {
    std::vector<HoleEntry> holes;
    bool operator==(const HolesExplicit&) const = default;
};
struct HolesAuto {
    int k = 8;
    double fwhm_mhz = default_hole_fwhm_mhz;
    double depth = 1.0;
    bool operator==(const HolesAuto&) const = default;
};
using HolePolicy = std::variant<HolesNone, HolesExplicit, HolesAuto>;

struct DriveSpec {
    double t0_ns = 0.0;
    double duration_ns = 6.0;
    double amplitude = 1.0;
    bool operator==(const DriveSpec&) const = default;
};

struct SweepSpec {
    double span_mhz = 150.0; // ω_s scans ω_c ± span
    int points = 301;
    std::vector<double> couplings_mhz = {8.0, 26.0};
    bool operator==(const SweepSpec&) const = default;
};

// All defaults form the reference parameter card: the seven-tooth comb
// (Δω/2π=40 MHz, σ_G/2π=150 MHz, γ_q/2π=9.4 MHz) with κ/2π=0.4 MHz,
// γ/2π=0.01 MHz, Ω/2π=26 MHz, N=1200 spins. A scenario without a drive
// block starts from the single-photon state A(0)=1.
struct Scenario {
    std::string name = "default";

    int m = 7;
    double delta_omega_mhz = 40.0;
    double sigma_g_mhz = 150.0;
    double gamma_q_mhz = 9.4;
    double q = 1.2;
    double omega_c_ghz = 2.6915;
    double omega_s_ghz = 2.6915;
    double omega_over_2pi_mhz = 26.0;

    double kappa_mhz = 0.4;
    double gamma_mhz = 0.01;
    double omega_p_ghz = 2.6915;

    std::optional<DriveSpec> drive;
    HolePolicy holes = HolesNone{};
    Solver solver = Solver::volterra;
    double t_max_ns = 400.0;
    double step_ns = 0.05;
    int n_spins = 1200;
    bool export_modes = false;
    bool export_laplace = false;
    std::optional<SweepSpec> sweep;
    std::string out_dir;

    bool operator==(const Scenario&) const = default;

    spectral::CombConfig comb_config() const;
    dynamics::SystemParams system_params() const;
    dynamics::DriveSignal drive_signal() const; // zero signal when !drive
    dynamics::TimeGrid time_grid() const;
};

// Strict parse: unknown keys and malformed values raise config_error with
// the offending key. An empty or whitespace-only file is the all-defaults
// scenario.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);
std::string scenario_to_json(const Scenario& s);

std::vector<std::string> builtin_scenario_names();
std::string builtin_scenario_summary(const std::string& name);
Scenario builtin_scenario(const std::string& name);

// Built-in name first, then filesystem path.
Scenario resolve_scenario(const std::string& name_or_path);

} // namespace revivals::cli
