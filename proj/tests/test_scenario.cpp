// test_scenario.cpp — scenario schema, builtins, runner determinism.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "revivals/errors.hpp"
#include "revivals/runner.hpp"
#include "revivals/scenario.hpp"

using namespace revivals;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("empty scenario text resolves to the paper defaults") {
    auto s = cli::parse_scenario("  \n", "test");
    CHECK(s.m == 7);
    CHECK(s.delta_omega_mhz == 40.0);
    CHECK(s.sigma_g_mhz == 150.0);
    CHECK(s.gamma_q_mhz == 9.4);
    CHECK(s.omega_c_ghz == 2.6915);
    CHECK(s.omega_over_2pi_mhz == 26.0);
    CHECK(s.kappa_mhz == 0.4);
    CHECK(s.gamma_mhz == 0.01);
    CHECK(s.n_spins == 1200);
    CHECK(!s.drive.has_value());
    CHECK(std::holds_alternative<cli::HolesNone>(s.holes));
}

TEST_CASE("unknown keys are hard errors naming the key") {
    CHECK_THROWS_WITH_AS(
        cli::parse_scenario(R"json({"system": {"kapa_mhz": 0.4}})json", "test"),
        doctest::Contains("kapa_mhz"), config_error);
    CHECK_THROWS_WITH_AS(cli::parse_scenario(R"json({"tmie": {}})json", "test"),
                         doctest::Contains("tmie"), config_error);
    CHECK_THROWS_AS(cli::parse_scenario(R"json({"solver": "odee"})json", "test"),
                    config_error);
    CHECK_THROWS_AS(cli::parse_scenario("{nonsense", "test"), config_error);
}

TEST_CASE("hole policies parse in all three forms") {
    auto s1 = cli::parse_scenario(R"json({"holes": "auto(k=8)"})json", "test");
    REQUIRE(std::holds_alternative<cli::HolesAuto>(s1.holes));
    CHECK(std::get<cli::HolesAuto>(s1.holes).k == 8);

    auto s2 = cli::parse_scenario(
        R"json({"holes": {"auto": {"k": 4, "fwhm_mhz": 1.0}}})json", "test");
    REQUIRE(std::holds_alternative<cli::HolesAuto>(s2.holes));
    CHECK(std::get<cli::HolesAuto>(s2.holes).k == 4);
    CHECK(std::get<cli::HolesAuto>(s2.holes).fwhm_mhz == 1.0);

    auto s3 = cli::parse_scenario(
        R"json({"holes": [{"center_mhz_rel_cavity": -17.5},
                      {"center_mhz_rel_cavity": 17.5, "depth": 0.5}]})json",
        "test");
    REQUIRE(std::holds_alternative<cli::HolesExplicit>(s3.holes));
    CHECK(std::get<cli::HolesExplicit>(s3.holes).holes.size() == 2);

    CHECK_THROWS_AS(cli::parse_scenario(R"json({"holes": "auto(k=x)"})json", "test"),
                    config_error);
    CHECK_THROWS_AS(
        cli::parse_scenario(R"json({"holes": [{"fwhm_mhz": 1.0}]})json", "test"),
        config_error);
}

TEST_CASE("built-in scenarios round-trip through JSON") {
    for (const std::string& name : cli::builtin_scenario_names()) {
        auto s = cli::builtin_scenario(name);
        auto back = cli::parse_scenario(cli::scenario_to_json(s), name);
        CHECK(back == s);
    }
}

TEST_CASE("built-in fig4 wires the paper parameters") {
    auto s = cli::builtin_scenario("fig4");
    CHECK(s.t_max_ns == 3000.0);
    REQUIRE(s.drive.has_value());
    CHECK(s.drive->duration_ns == 6.0);
    REQUIRE(std::holds_alternative<cli::HolesAuto>(s.holes));
    CHECK(std::get<cli::HolesAuto>(s.holes).k == 8);
}

TEST_CASE("runner: determinism and artifact layout") {
    cli::Scenario s = cli::parse_scenario(R"json({
        "name": "tiny",
        "comb": {"m": 3, "omega_over_2pi_mhz": 12},
        "time": {"t_max_ns": 40, "step_ns": 0.05},
        "n_spins": 128,
        "solver": "volterra"
    })json", "test");

    const fs::path base = fs::temp_directory_path() / "revivals_test";
    fs::remove_all(base);
    cli::RunOptions o1;
    o1.out_dir = (base / "r1").string();
    cli::RunOptions o2;
    o2.out_dir = (base / "r2").string();
    auto rep1 = cli::run_scenario(s, o1);
    auto rep2 = cli::run_scenario(s, o2);
    for (const char* f : {"spectrum.csv", "trajectory.csv", "pulses.csv"}) {
        CHECK(fs::exists(base / "r1" / f));
        CHECK(slurp(base / "r1" / f) == slurp(base / "r2" / f));
    }
    CHECK(rep1.trajectory_files.size() == 1);
    CHECK(rep2.pulse_count == rep1.pulse_count);
}

TEST_CASE("runner: solver=all cross-validates") {
    cli::Scenario s = cli::parse_scenario(R"json({
        "name": "tinyall",
        "comb": {"m": 1, "omega_over_2pi_mhz": 8},
        "time": {"t_max_ns": 60, "step_ns": 0.02},
        "n_spins": 600,
        "solver": "all"
    })json", "test");
    const fs::path base = fs::temp_directory_path() / "revivals_test_all";
    fs::remove_all(base);
    cli::RunOptions o;
    o.out_dir = base.string();
    auto rep = cli::run_scenario(s, o);
    CHECK(rep.ode_volterra_deviation >= 0.0);
    CHECK(rep.ode_volterra_deviation < 1e-5);
    CHECK(rep.laplace_ode_deviation >= 0.0);
    CHECK(rep.laplace_ode_deviation < 1e-2);
    CHECK(fs::exists(base / "trajectory.csv"));
    CHECK(fs::exists(base / "trajectory_ode.csv"));
    CHECK(fs::exists(base / "trajectory_laplace.csv"));
    CHECK(fs::exists(base / "report.json"));
}

TEST_CASE("runner: auto holes produce peaks.csv and burn the spectrum") {
    cli::Scenario s = cli::parse_scenario(R"json({
        "name": "tinyauto",
        "time": {"t_max_ns": 30, "step_ns": 0.05},
        "n_spins": 400,
        "holes": "auto(k=8)",
        "solver": "volterra"
    })json", "test");
    const fs::path base = fs::temp_directory_path() / "revivals_test_auto";
    fs::remove_all(base);
    cli::RunOptions o;
    o.out_dir = base.string();
    auto rep = cli::run_scenario(s, o);
    CHECK(rep.peaks.size() == 8);
    CHECK(fs::exists(base / "peaks.csv"));
    // eight zero crossings burned into spectrum.csv
    std::ifstream in(base / "spectrum.csv");
    std::string line;
    std::getline(in, line); // header
    int zeros = 0;
    double prev = 1.0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double v = std::stod(line.substr(comma + 1));
        if (v < 1e-7 && prev >= 1e-7)
            ++zeros;
        prev = v;
    }
    CHECK(zeros >= 6); // grid may straddle a couple of the notches
}

TEST_CASE("runner: laplace solver rejects driven scenarios") {
    cli::Scenario s = cli::parse_scenario(R"json({
        "drive": {"duration_ns": 6},
        "solver": "laplace",
        "comb": {"m": 1},
        "time": {"t_max_ns": 20, "step_ns": 0.1},
        "n_spins": 64
    })json", "test");
    cli::RunOptions o;
    o.out_dir = (fs::temp_directory_path() / "revivals_test_lap").string();
    CHECK_THROWS_AS(cli::run_scenario(s, o), config_error);
}

TEST_CASE("sensitivity requires auto holes") {
    cli::Scenario s; // defaults: holes none
    CHECK_THROWS_AS(cli::sensitivity_study(s, {0.03}), config_error);
}

TEST_CASE("runner: tiny detuning sweep writes the modes map") {
    cli::Scenario s = cli::parse_scenario(R"json({
        "name": "tinysweep",
        "comb": {"omega_over_2pi_mhz": 8},
        "n_spins": 200,
        "sweep": {"span_mhz": 40, "points": 3, "couplings_mhz": [8]}
    })json", "test");
    const fs::path base = fs::temp_directory_path() / "revivals_test_sweep";
    fs::remove_all(base);
    cli::RunOptions o;
    o.out_dir = base.string();
    o.threads = 2;
    auto rep = cli::run_sweep(s, o);
    CHECK(fs::exists(base / "modes.csv"));
    std::ifstream in(base / "modes.csv");
    std::string line;
    int rows = -1;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 3 * 201); // points x (N+1) eigenvalues
}
