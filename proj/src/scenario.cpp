// scenario.cpp — scenario schema, builtins, JSON round-trip.

#include "revivals/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "revivals/errors.hpp"

namespace revivals::cli {

using nlohmann::json;

const char* solver_name(Solver s) {
    switch (s) {
    case Solver::ode:
        return "ode";
    case Solver::volterra:
        return "volterra";
    case Solver::laplace:
        return "laplace";
    case Solver::all:
        return "all";
    }
    return "?";
}

spectral::CombConfig Scenario::comb_config() const {
    spectral::CombConfig c;
    c.ensembles = m;
    c.spacing = omega_from_mhz(delta_omega_mhz);
    c.comb_center = omega_from_ghz(omega_s_ghz);
    c.cavity = omega_from_ghz(omega_c_ghz);
    c.weight_width = omega_from_mhz(sigma_g_mhz);
    c.coupling = omega_from_mhz(omega_over_2pi_mhz);
    c.fwhm = omega_from_mhz(gamma_q_mhz);
    c.q = q;
    return c;
}

dynamics::SystemParams Scenario::system_params() const {
    dynamics::SystemParams p;
    p.kappa = omega_from_mhz(kappa_mhz);
    p.gamma = omega_from_mhz(gamma_mhz);
    p.cavity = omega_from_ghz(omega_c_ghz);
    p.pump = omega_from_ghz(omega_p_ghz);
    return p;
}

dynamics::DriveSignal Scenario::drive_signal() const {
    if (!drive)
        return {};
    dynamics::DriveSignal d = dynamics::rectangular_drive(
        us_from_ns(drive->t0_ns), us_from_ns(drive->duration_ns),
        drive->amplitude);
    d.detuning = omega_from_ghz(omega_p_ghz) - omega_from_ghz(omega_c_ghz);
    return d;
}

dynamics::TimeGrid Scenario::time_grid() const {
    return dynamics::make_grid(us_from_ns(t_max_ns), us_from_ns(step_ns));
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw config_error("unknown key '" + item.key() + "' in " + where);
    }
}

double get_num(const json& j, const char* key, double fallback,
               const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw config_error("key '" + std::string(key) + "' in " + where +
                           " must be a number");
    return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int fallback,
            const std::string& where) {
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw config_error("key '" + std::string(key) + "' in " + where +
                           " must be an integer");
    return j.at(key).get<int>();
}

HolePolicy parse_holes(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "none")
            return HolesNone{};
        // shorthand: auto(k=8)
        if (s.rfind("auto(k=", 0) == 0 && s.back() == ')') {
            HolesAuto a;
            try {
                a.k = std::stoi(s.substr(7, s.size() - 8));
            } catch (const std::exception&) {
                throw config_error("malformed hole policy '" + s + "'");
            }
            return a;
        }
        throw config_error("malformed hole policy '" + s +
                           "' (expected \"none\", \"auto(k=N)\", an object, "
                           "or a list)");
    }
    if (j.is_array()) {
        HolesExplicit e;
        for (const auto& h : j) {
            check_keys(h, {"center_mhz_rel_cavity", "fwhm_mhz", "depth"},
                       "holes[]");
            if (!h.contains("center_mhz_rel_cavity"))
                throw config_error("hole entry requires center_mhz_rel_cavity");
            e.holes.push_back(
                {h.at("center_mhz_rel_cavity").get<double>(),
                 get_num(h, "fwhm_mhz", default_hole_fwhm_mhz, "holes[]"),
                 get_num(h, "depth", 1.0, "holes[]")});
        }
        return e;
    }
    if (j.is_object()) {
        check_keys(j, {"auto"}, "holes");
        if (!j.contains("auto"))
            throw config_error("holes object requires an 'auto' block");
        const json& a = j.at("auto");
        check_keys(a, {"k", "fwhm_mhz", "depth"}, "holes.auto");
        HolesAuto out;
        out.k = get_int(a, "k", 8, "holes.auto");
        out.fwhm_mhz = get_num(a, "fwhm_mhz", default_hole_fwhm_mhz, "holes.auto");
        out.depth = get_num(a, "depth", 1.0, "holes.auto");
        return out;
    }
    throw config_error("holes must be \"none\", \"auto(k=N)\", an object, or "
                       "a list");
}

Solver parse_solver(const std::string& s) {
    if (s == "ode")
        return Solver::ode;
    if (s == "volterra")
        return Solver::volterra;
    if (s == "laplace")
        return Solver::laplace;
    if (s == "all")
        return Solver::all;
    throw config_error("unknown solver '" + s +
                       "' (expected ode|volterra|laplace|all)");
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    const bool blank =
        std::all_of(text.begin(), text.end(),
                    [](unsigned char c) { return std::isspace(c); });
    json j;
    if (blank) {
        j = json::object();
    } else {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw config_error(origin + ": " + e.what());
        }
    }
    if (!j.is_object())
        throw config_error(origin + ": scenario must be a JSON object");

    check_keys(j,
               {"name", "comb", "system", "drive", "holes", "solver", "time",
                "n_spins", "export_modes", "export_laplace", "sweep",
                "out_dir"},
               "scenario");

    Scenario s;
    if (j.contains("name"))
        s.name = j.at("name").get<std::string>();

    if (j.contains("comb")) {
        const json& c = j.at("comb");
        check_keys(c,
                   {"m", "delta_omega_mhz", "sigma_g_mhz", "gamma_q_mhz", "q",
                    "omega_c_ghz", "omega_s_ghz", "omega_over_2pi_mhz"},
                   "comb");
        s.m = get_int(c, "m", s.m, "comb");
        s.delta_omega_mhz = get_num(c, "delta_omega_mhz", s.delta_omega_mhz, "comb");
        s.sigma_g_mhz = get_num(c, "sigma_g_mhz", s.sigma_g_mhz, "comb");
        s.gamma_q_mhz = get_num(c, "gamma_q_mhz", s.gamma_q_mhz, "comb");
        s.q = get_num(c, "q", s.q, "comb");
        s.omega_c_ghz = get_num(c, "omega_c_ghz", s.omega_c_ghz, "comb");
        // The comb center follows the cavity unless detuned explicitly.
        s.omega_s_ghz = get_num(c, "omega_s_ghz", s.omega_c_ghz, "comb");
        s.omega_over_2pi_mhz =
            get_num(c, "omega_over_2pi_mhz", s.omega_over_2pi_mhz, "comb");
    }

    if (j.contains("system")) {
        const json& c = j.at("system");
        check_keys(c, {"kappa_mhz", "gamma_mhz", "omega_p_ghz"}, "system");
        s.kappa_mhz = get_num(c, "kappa_mhz", s.kappa_mhz, "system");
        s.gamma_mhz = get_num(c, "gamma_mhz", s.gamma_mhz, "system");
        s.omega_p_ghz = get_num(c, "omega_p_ghz", s.omega_c_ghz, "system");
    } else {
        s.omega_p_ghz = s.omega_c_ghz;
    }

    if (j.contains("drive")) {
        const json& c = j.at("drive");
        check_keys(c, {"t0_ns", "duration_ns", "amplitude"}, "drive");
        DriveSpec d;
        d.t0_ns = get_num(c, "t0_ns", 0.0, "drive");
        d.duration_ns = get_num(c, "duration_ns", 6.0, "drive");
        d.amplitude = get_num(c, "amplitude", 1.0, "drive");
        s.drive = d;
    }

    if (j.contains("holes"))
        s.holes = parse_holes(j.at("holes"));
    if (j.contains("solver"))
        s.solver = parse_solver(j.at("solver").get<std::string>());
    if (j.contains("time")) {
        const json& c = j.at("time");
        check_keys(c, {"t_max_ns", "step_ns"}, "time");
        s.t_max_ns = get_num(c, "t_max_ns", s.t_max_ns, "time");
        s.step_ns = get_num(c, "step_ns", s.step_ns, "time");
    }
    s.n_spins = get_int(j, "n_spins", s.n_spins, "scenario");
    if (j.contains("export_modes"))
        s.export_modes = j.at("export_modes").get<bool>();
    if (j.contains("export_laplace"))
        s.export_laplace = j.at("export_laplace").get<bool>();
    if (j.contains("sweep")) {
        const json& c = j.at("sweep");
        check_keys(c, {"span_mhz", "points", "couplings_mhz"}, "sweep");
        SweepSpec sw;
        sw.span_mhz = get_num(c, "span_mhz", sw.span_mhz, "sweep");
        sw.points = get_int(c, "points", sw.points, "sweep");
        if (c.contains("couplings_mhz"))
            sw.couplings_mhz = c.at("couplings_mhz").get<std::vector<double>>();
        s.sweep = sw;
    }
    if (j.contains("out_dir"))
        s.out_dir = j.at("out_dir").get<std::string>();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["comb"] = {{"m", s.m},
                 {"delta_omega_mhz", s.delta_omega_mhz},
                 {"sigma_g_mhz", s.sigma_g_mhz},
                 {"gamma_q_mhz", s.gamma_q_mhz},
                 {"q", s.q},
                 {"omega_c_ghz", s.omega_c_ghz},
                 {"omega_s_ghz", s.omega_s_ghz},
                 {"omega_over_2pi_mhz", s.omega_over_2pi_mhz}};
    j["system"] = {{"kappa_mhz", s.kappa_mhz},
                   {"gamma_mhz", s.gamma_mhz},
                   {"omega_p_ghz", s.omega_p_ghz}};
    if (s.drive)
        j["drive"] = {{"t0_ns", s.drive->t0_ns},
                      {"duration_ns", s.drive->duration_ns},
                      {"amplitude", s.drive->amplitude}};
    if (std::holds_alternative<HolesNone>(s.holes)) {
        j["holes"] = "none";
    } else if (const auto* e = std::get_if<HolesExplicit>(&s.holes)) {
        json arr = json::array();
        for (const HoleEntry& h : e->holes)
            arr.push_back({{"center_mhz_rel_cavity", h.center_mhz_rel_cavity},
                           {"fwhm_mhz", h.fwhm_mhz},
                           {"depth", h.depth}});
        j["holes"] = arr;
    } else {
        const auto& a = std::get<HolesAuto>(s.holes);
        j["holes"] = {{"auto",
                       {{"k", a.k}, {"fwhm_mhz", a.fwhm_mhz}, {"depth", a.depth}}}};
    }
    j["solver"] = solver_name(s.solver);
    j["time"] = {{"t_max_ns", s.t_max_ns}, {"step_ns", s.step_ns}};
    j["n_spins"] = s.n_spins;
    j["export_modes"] = s.export_modes;
    j["export_laplace"] = s.export_laplace;
    if (s.sweep)
        j["sweep"] = {{"span_mhz", s.sweep->span_mhz},
                      {"points", s.sweep->points},
                      {"couplings_mhz", s.sweep->couplings_mhz}};
    if (!s.out_dir.empty())
        j["out_dir"] = s.out_dir;
    return j.dump(2) + "\n";
}

namespace {

struct Builtin {
    const char* name;
    const char* summary;
    Scenario (*make)();
};

Scenario make_default() { return Scenario{}; }

Scenario make_fig1a() {
    Scenario s;
    s.name = "fig1a";
    return s;
}

Scenario make_fig1b() {
    Scenario s;
    s.name = "fig1b";
    s.holes = HolesAuto{};
    s.export_modes = true;
    return s;
}

Scenario make_fig2(const char* name, double coupling_mhz, bool driven,
                   double t_max_ns) {
    Scenario s;
    s.name = name;
    s.omega_over_2pi_mhz = coupling_mhz;
    if (driven)
        s.drive = DriveSpec{0.0, 6.0, 1.0};
    s.t_max_ns = t_max_ns;
    return s;
}

Scenario make_fig3(const char* name, double coupling_mhz) {
    Scenario s;
    s.name = name;
    s.omega_over_2pi_mhz = coupling_mhz;
    s.export_modes = true;
    return s;
}

Scenario make_fig3sweep() {
    Scenario s;
    s.name = "fig3sweep";
    s.sweep = SweepSpec{};
    return s;
}

Scenario make_fig4() {
    Scenario s;
    s.name = "fig4";
    s.holes = HolesAuto{};
    s.drive = DriveSpec{0.0, 6.0, 1.0};
    s.t_max_ns = 3000.0;
    s.export_modes = true;
    return s;
}

Scenario make_figs2(const char* name, double coupling_mhz) {
    Scenario s;
    s.name = name;
    s.omega_over_2pi_mhz = coupling_mhz;
    s.export_laplace = true;
    s.solver = Solver::laplace;
    return s;
}

Scenario make_longpulse() {
    Scenario s;
    s.name = "longpulse";
    s.drive = DriveSpec{0.0, 100.0, 1.0};
    s.t_max_ns = 600.0;
    return s;
}

const Builtin builtins[] = {
    {"default", "reference comb, single photon, Volterra route", make_default},
    {"fig1a", "seven-tooth comb spectrum export", make_fig1a},
    {"fig1b", "comb spectrum with eight auto-placed holes", make_fig1b},
    {"fig2a", "single photon, Omega/2pi=8 MHz (Rabi decay)", nullptr},
    {"fig2b", "6 ns pulse, Omega/2pi=8 MHz", nullptr},
    {"fig2c", "single photon, Omega/2pi=26 MHz (revivals)", nullptr},
    {"fig2d", "6 ns pulse, Omega/2pi=26 MHz (revivals)", nullptr},
    {"fig3b", "resonant mode structure, Omega/2pi=8 MHz", nullptr},
    {"fig3e", "resonant mode structure, Omega/2pi=26 MHz", nullptr},
    {"fig3sweep", "detuning maps for Omega/2pi in {8,26} MHz", make_fig3sweep},
    {"fig4", "eight auto holes + 6 ns pulse over 3 us", make_fig4},
    {"figs2a", "Lamb shift / kernel U spectra, Omega/2pi=8 MHz", nullptr},
    {"figs2b", "Lamb shift / kernel U spectra, Omega/2pi=26 MHz", nullptr},
    {"longpulse", "100 ns pulse demo (dephasing during drive)", make_longpulse},
};

Scenario make_by_name(const std::string& name) {
    if (name == "fig2a")
        return make_fig2("fig2a", 8.0, false, 400.0);
    if (name == "fig2b")
        return make_fig2("fig2b", 8.0, true, 400.0);
    if (name == "fig2c")
        return make_fig2("fig2c", 26.0, false, 600.0);
    if (name == "fig2d")
        return make_fig2("fig2d", 26.0, true, 600.0);
    if (name == "fig3b")
        return make_fig3("fig3b", 8.0);
    if (name == "fig3e")
        return make_fig3("fig3e", 26.0);
    if (name == "figs2a")
        return make_figs2("figs2a", 8.0);
    if (name == "figs2b")
        return make_figs2("figs2b", 26.0);
    for (const Builtin& b : builtins)
        if (name == b.name && b.make)
            return b.make();
    throw config_error("unknown built-in scenario '" + name + "'");
}

} // namespace

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> names;
    for (const Builtin& b : builtins)
        names.push_back(b.name);
    return names;
}

std::string builtin_scenario_summary(const std::string& name) {
    for (const Builtin& b : builtins)
        if (name == b.name)
            return b.summary;
    return "";
}

Scenario builtin_scenario(const std::string& name) { return make_by_name(name); }

Scenario resolve_scenario(const std::string& name_or_path) {
    for (const Builtin& b : builtins)
        if (name_or_path == b.name)
            return make_by_name(name_or_path);
    return load_scenario(name_or_path);
}

} // namespace revivals::cli
