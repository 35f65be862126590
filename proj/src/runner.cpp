// runner.cpp — scenario pipeline and CSV artifact writers.

#include "revivals/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "revivals/errors.hpp"
#include "revivals/laplace.hpp"

namespace revivals::cli {

namespace fs = std::filesystem;
using clock_t_ = std::chrono::steady_clock;

namespace {

double seconds_since(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

// Fixed formatting keeps runs byte-identical.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw config_error("cannot write '" + path + "'");
        out_ << header << "\n";
    }
    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first)
                out_ << ",";
            out_ << fmt(v);
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

void write_spectrum_csv(const std::string& path,
                        const spectral::SpectralFunction& f) {
    CsvWriter csv(path, "omega_minus_omega_c_over_2pi_mhz,F");
    const double wc = f.comb().cavity;
    const double step = omega_from_mhz(0.05);
    const long n = std::lround((f.window_hi() - f.window_lo()) / step);
    for (long i = 0; i <= n; ++i) {
        const double w = f.window_lo() + double(i) * step;
        csv.row({mhz_from_omega(w - wc), f(w)});
    }
}

void write_trajectory_csv(const std::string& path,
                          const dynamics::Trajectory& traj) {
    CsvWriter csv(path, "t_ns,re_A,im_A,abs2_A,abs2_A_normalized,"
                        "barrier_exp_minus_kappa_t");
    double vmax = 0.0;
    for (const auto& a : traj.a)
        vmax = std::max(vmax, std::norm(a));
    const double inv = vmax > 0.0 ? 1.0 / vmax : 0.0;
    for (std::size_t i = 0; i < traj.a.size(); ++i) {
        const double t = traj.grid.time(i);
        const double abs2 = std::norm(traj.a[i]);
        csv.row({ns_from_us(t), traj.a[i].real(), traj.a[i].imag(), abs2,
                 abs2 * inv, std::exp(-traj.kappa * t)});
    }
}

void write_pulses_csv(const std::string& path,
                      const dynamics::PulseMetrics& pm) {
    CsvWriter csv(path, "pulse_index,t_ns,peak_abs2,above_barrier");
    for (std::size_t i = 0; i < pm.pulses.size(); ++i)
        csv.row({double(i), ns_from_us(pm.pulses[i].t), pm.pulses[i].abs2,
                 pm.pulses[i].above_barrier ? 1.0 : 0.0});
}

void write_peaks_csv(const std::string& path,
                     const std::vector<modes::Peak>& peaks, double cavity) {
    CsvWriter csv(path, "peak_index,omega_minus_omega_c_over_2pi_mhz,"
                        "cavity_content");
    for (std::size_t i = 0; i < peaks.size(); ++i)
        csv.row({double(i), mhz_from_omega(peaks[i].frequency - cavity),
                 peaks[i].content});
}

void write_modes_csv(const std::string& path, const modes::DetuningMap& map) {
    CsvWriter csv(path, "omega_s_over_2pi_ghz,im_lambda_over_2pi_mhz,"
                        "re_lambda_over_2pi_mhz,cavity_content");
    for (const modes::SweepPoint& pt : map.points)
        for (std::size_t l = 0; l < pt.im_lambda.size(); ++l)
            csv.row({ghz_from_omega(pt.comb_center),
                     mhz_from_omega(pt.im_lambda[l]),
                     mhz_from_omega(pt.re_lambda[l]), pt.cavity_content[l]});
}

void write_modes_csv_single(const std::string& path, const modes::ModeSet& ms,
                            double comb_center) {
    CsvWriter csv(path, "omega_s_over_2pi_ghz,im_lambda_over_2pi_mhz,"
                        "re_lambda_over_2pi_mhz,cavity_content");
    for (int l = 0; l < ms.dim; ++l)
        csv.row({ghz_from_omega(comb_center),
                 mhz_from_omega(ms.lambda[l].imag()),
                 mhz_from_omega(ms.lambda[l].real()), ms.cavity_content[l]});
}

void write_laplace_csv(const std::string& path,
                       const laplace::LaplaceSpectrum& sp, double cavity) {
    // resonance_flag: 0 none, 1 non-resonant intersection, 2 resonant.
    CsvWriter csv(path, "omega_minus_omega_c_over_2pi_mhz,delta,U,"
                        "resonance_flag");
    const double half = sp.omega.size() > 1
                            ? 0.5 * (sp.omega[1] - sp.omega[0])
                            : 0.0;
    for (std::size_t i = 0; i < sp.omega.size(); ++i) {
        double flag = 0.0;
        for (const laplace::Resonance& r : sp.resonances)
            if (std::fabs(r.omega - sp.omega[i]) <= half)
                flag = r.resonant ? 2.0 : 1.0;
        csv.row({mhz_from_omega(sp.omega[i] - cavity), sp.delta[i], sp.u[i],
                 flag});
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

void write_report(const std::string& path, const RunReport& r,
                  const Scenario& s) {
    std::ofstream out(path, std::ios::binary);
    out << "{\n  \"scenario\": \"" << json_escape(s.name) << "\",\n";
    out << "  \"trajectories\": {";
    bool first = true;
    for (const auto& [route, file] : r.trajectory_files) {
        out << (first ? "" : ", ") << "\"" << route << "\": \""
            << json_escape(file) << "\"";
        first = false;
    }
    out << "},\n";
    out << "  \"ode_volterra_deviation\": " << r.ode_volterra_deviation
        << ",\n";
    out << "  \"laplace_ode_deviation\": " << r.laplace_ode_deviation << ",\n";
    out << "  \"pulse_count\": " << r.pulse_count << ",\n";
    out << "  \"pulses_above_barrier\": " << r.pulses_above_barrier << ",\n";
    out << "  \"wall_s\": {";
    first = true;
    for (const auto& [stage, secs] : r.wall_s) {
        out << (first ? "" : ", ") << "\"" << stage << "\": " << secs;
        first = false;
    }
    out << "}\n}\n";
}

double max_amp_deviation(const dynamics::Trajectory& x,
                         const dynamics::Trajectory& y) {
    double dev = 0.0, scale = 0.0;
    const std::size_t n = std::min(x.a.size(), y.a.size());
    for (std::size_t i = 0; i < n; ++i) {
        dev = std::max(dev, std::abs(x.a[i] - y.a[i]));
        scale = std::max(scale, std::abs(x.a[i]));
    }
    return scale > 0.0 ? dev / scale : 0.0;
}

double max_occupation_deviation(const dynamics::Trajectory& x,
                                const dynamics::Trajectory& y) {
    double dev = 0.0, scale = 0.0;
    const std::size_t n = std::min(x.a.size(), y.a.size());
    for (std::size_t i = 0; i < n; ++i) {
        dev = std::max(dev, std::fabs(std::norm(x.a[i]) - std::norm(y.a[i])));
        scale = std::max(scale, std::norm(x.a[i]));
    }
    return scale > 0.0 ? dev / scale : 0.0;
}

} // namespace

std::string default_out_dir(const Scenario& s, const RunOptions& opts) {
    if (!opts.out_dir.empty())
        return opts.out_dir;
    if (!s.out_dir.empty())
        return s.out_dir;
    if (const char* env = std::getenv("REVIVALS_OUT"))
        return std::string(env) + "/" + s.name;
    return "out/" + s.name;
}

namespace {

struct Prepared {
    spectral::SpectralFunction f;         // with holes applied
    spectral::SpectralFunction base;      // hole-free
    std::vector<modes::Peak> peaks;       // when an eigensolve ran
    bool modes_ran = false;
    modes::ModeSet mode_set;
};

Prepared prepare_spectrum(const Scenario& s, RunReport& report,
                          bool need_modes) {
    const auto cfg = s.comb_config();
    const auto params = s.system_params();
    const auto t0 = clock_t_::now();
    spectral::SpectralFunction base = spectral::build_spectral_function(cfg);
    Prepared prep{base, base, {}, false, {}};

    const bool want_auto = std::holds_alternative<HolesAuto>(s.holes);
    if (need_modes || want_auto) {
        const auto ens = spectral::discretize_ensemble(base, s.n_spins);
        prep.mode_set =
            modes::solve_modes(modes::build_generator_matrix(ens, params));
        prep.modes_ran = true;
        report.wall_s["modes"] = seconds_since(t0);
    }

    if (want_auto) {
        const auto& a = std::get<HolesAuto>(s.holes);
        prep.peaks = modes::find_polariton_peaks(prep.mode_set, a.k);
        spectral::HoleSpec spec;
        for (const modes::Peak& p : prep.peaks)
            spec.centers.push_back(p.frequency);
        spec.fwhm = omega_from_mhz(a.fwhm_mhz);
        spec.depth = a.depth;
        prep.f = spectral::apply_holes(base, spec);
    } else if (const auto* e = std::get_if<HolesExplicit>(&s.holes)) {
        if (!e->holes.empty()) {
            const double wc = cfg.cavity;
            // Entries may carry individual widths/depths; they are
            // applied as successive burns.
            for (const HoleEntry& h : e->holes) {
                spectral::HoleSpec spec;
                spec.centers = {wc + omega_from_mhz(h.center_mhz_rel_cavity)};
                spec.fwhm = omega_from_mhz(h.fwhm_mhz);
                spec.depth = h.depth;
                prep.f = spectral::apply_holes(prep.f, spec);
            }
        }
        if (prep.modes_ran)
            prep.peaks = modes::dominant_peaks(prep.mode_set);
    } else if (prep.modes_ran) {
        prep.peaks = modes::dominant_peaks(prep.mode_set);
    }
    return prep;
}

dynamics::Trajectory run_route(const Scenario& s, const Prepared& prep,
                               Solver route, RunReport& report) {
    const auto params = s.system_params();
    const auto grid = s.time_grid();
    const auto drive = s.drive_signal();
    const std::complex<double> a0 =
        s.drive ? std::complex<double>(0.0, 0.0) : std::complex<double>(1.0, 0.0);
    const auto t0 = clock_t_::now();
    dynamics::Trajectory traj;
    switch (route) {
    case Solver::ode: {
        const auto ens = spectral::discretize_ensemble(prep.f, s.n_spins);
        traj = dynamics::integrate_ode(ens, params, drive, a0, {}, grid);
        break;
    }
    case Solver::volterra:
        traj = dynamics::solve_volterra(prep.f, params, s.comb_config().coupling,
                                        drive, a0, grid);
        break;
    case Solver::laplace:
        if (s.drive)
            throw config_error(
                "the laplace solver supports the single-photon case only "
                "(remove the drive block)");
        traj = laplace::amplitude_from_laplace(prep.f, s.comb_config().coupling,
                                               params.kappa, params.gamma, grid);
        break;
    case Solver::all:
        throw std::logic_error("run_route takes a concrete solver");
    }
    report.wall_s[dynamics::route_name(traj.route)] = seconds_since(t0);
    return traj;
}

} // namespace

RunReport run_scenario(const Scenario& s, const RunOptions& opts) {
    Scenario sc = s;
    if (!opts.solver.empty()) {
        if (opts.solver == "ode")
            sc.solver = Solver::ode;
        else if (opts.solver == "volterra")
            sc.solver = Solver::volterra;
        else if (opts.solver == "laplace")
            sc.solver = Solver::laplace;
        else if (opts.solver == "all")
            sc.solver = Solver::all;
        else
            throw config_error("unknown solver override '" + opts.solver + "'");
    }
    if (sc.sweep)
        return run_sweep(sc, opts);

    RunReport report;
    report.out_dir = default_out_dir(sc, opts);
    fs::create_directories(report.out_dir);
    const auto dir = fs::path(report.out_dir);

    Prepared prep = prepare_spectrum(sc, report, sc.export_modes);
    write_spectrum_csv((dir / "spectrum.csv").string(), prep.f);
    if (prep.modes_ran) {
        write_peaks_csv((dir / "peaks.csv").string(), prep.peaks,
                        sc.comb_config().cavity);
        if (sc.export_modes)
            write_modes_csv_single((dir / "modes.csv").string(), prep.mode_set,
                                   sc.comb_config().comb_center);
        report.peaks = prep.peaks;
    }

    std::vector<Solver> routes;
    if (sc.solver == Solver::all) {
        routes = {Solver::volterra, Solver::ode};
        if (!sc.drive && !prep.f.has_holes())
            routes.push_back(Solver::laplace);
    } else {
        routes = {sc.solver};
    }

    std::vector<dynamics::Trajectory> trajs;
    for (Solver r : routes)
        trajs.push_back(run_route(sc, prep, r, report));

    // Primary trajectory: the first route (scenario's choice; volterra when
    // "all").
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const std::string route = dynamics::route_name(trajs[i].route);
        const std::string file =
            i == 0 ? "trajectory.csv" : "trajectory_" + route + ".csv";
        write_trajectory_csv((dir / file).string(), trajs[i]);
        report.trajectory_files[route] = (dir / file).string();
    }

    // Nominal revival spacing 2π/Δω; single-ensemble combs have no revivals,
    // any positive separation works for the peak picker.
    const double spacing = sc.m > 1 ? revivals::two_pi / sc.comb_config().spacing
                                    : us_from_ns(25.0);
    const auto pm =
        dynamics::pulse_metrics(trajs[0], s.system_params().kappa, spacing);
    write_pulses_csv((dir / "pulses.csv").string(), pm);
    report.pulse_count = pm.pulses.size();
    report.pulses_above_barrier = pm.count_above(trajs[0].grid.span());

    if (sc.export_laplace) {
        const auto params = sc.system_params();
        const auto sp = laplace::sample_spectrum(
            prep.f, sc.comb_config().coupling, params.kappa, params.gamma);
        write_laplace_csv((dir / "laplace.csv").string(), sp,
                          sc.comb_config().cavity);
    }

    // Cross-validation when several routes ran.
    if (trajs.size() >= 2) {
        // trajs[0]=volterra, trajs[1]=ode by construction
        report.ode_volterra_deviation = max_amp_deviation(trajs[1], trajs[0]);
        if (trajs.size() >= 3)
            report.laplace_ode_deviation =
                max_occupation_deviation(trajs[1], trajs[2]);
    }
    write_report((dir / "report.json").string(), report, sc);

    if (report.ode_volterra_deviation > 1.0e-5)
        throw numeric_error(
            "cross-validation gate: ODE/Volterra deviation " +
            std::to_string(report.ode_volterra_deviation) + " exceeds 1e-5");
    return report;
}

RunReport run_sweep(const Scenario& s, const RunOptions& opts) {
    if (!s.sweep)
        throw config_error("scenario '" + s.name + "' has no sweep block");
    RunReport report;
    report.out_dir = default_out_dir(s, opts);
    fs::create_directories(report.out_dir);
    const auto dir = fs::path(report.out_dir);

    const SweepSpec& sw = *s.sweep;
    if (sw.points < 2)
        throw config_error("sweep requires at least 2 points");
    const double wc = omega_from_ghz(s.omega_c_ghz);
    std::vector<double> centers(sw.points);
    for (int i = 0; i < sw.points; ++i)
        centers[i] = wc + omega_from_mhz(-sw.span_mhz +
                                         2.0 * sw.span_mhz * i / (sw.points - 1));

    for (double omega_mhz : sw.couplings_mhz) {
        spectral::CombConfig cfg = s.comb_config();
        cfg.coupling = omega_from_mhz(omega_mhz);
        const auto t0 = clock_t_::now();
        const auto map = modes::sweep_detuning(cfg, s.system_params(), centers,
                                               s.n_spins, opts.threads);
        char label[64];
        std::snprintf(label, sizeof(label), "%g", omega_mhz);
        const std::string file = sw.couplings_mhz.size() == 1
                                     ? "modes.csv"
                                     : "modes_omega" + std::string(label) +
                                           "mhz.csv";
        write_modes_csv((dir / file).string(), map);
        report.wall_s["sweep_omega" + std::string(label)] = seconds_since(t0);
        report.trajectory_files["sweep_omega" + std::string(label)] =
            (dir / file).string();
    }
    write_report((dir / "report.json").string(), report, s);
    return report;
}

std::vector<SensitivityRow>
sensitivity_study(const Scenario& s, const std::vector<double>& fractions,
                  const RunOptions& opts) {
    if (!std::holds_alternative<HolesAuto>(s.holes))
        throw config_error("sensitivity study requires a scenario with "
                           "auto-placed holes");
    RunReport scratch;
    Prepared prep = prepare_spectrum(s, scratch, false);
    const auto params = s.system_params();
    const auto grid = s.time_grid();
    const auto drive = s.drive_signal();
    const std::complex<double> a0 =
        s.drive ? std::complex<double>(0.0, 0.0) : std::complex<double>(1.0, 0.0);
    const double coupling = s.comb_config().coupling;
    const double wc = s.comb_config().cavity;
    const auto& auto_spec = std::get<HolesAuto>(s.holes);

    auto late_envelope_for = [&](double fraction) {
        spectral::HoleSpec spec;
        for (const modes::Peak& p : prep.peaks)
            spec.centers.push_back(wc + (1.0 + fraction) * (p.frequency - wc));
        spec.fwhm = omega_from_mhz(auto_spec.fwhm_mhz);
        spec.depth = auto_spec.depth;
        const auto f = spectral::apply_holes(prep.base, spec);
        const auto traj =
            dynamics::solve_volterra(f, params, coupling, drive, a0, grid);
        const auto pm = dynamics::pulse_metrics(
            traj, params.kappa, revivals::two_pi / s.comb_config().spacing);
        return pm.late_envelope(2.0); // t > 2 us
    };

    const double reference = late_envelope_for(0.0);
    std::vector<SensitivityRow> rows;
    rows.push_back({0.0, reference, 1.0});
    for (double fr : fractions) {
        if (fr == 0.0)
            continue;
        const double env = late_envelope_for(fr);
        rows.push_back({fr, env, reference > 0.0 ? env / reference : 0.0});
    }

    const std::string out = default_out_dir(s, opts);
    fs::create_directories(out);
    CsvWriter csv(out + "/sensitivity.csv",
                  "shift_fraction,late_envelope,ratio_vs_unshifted");
    for (const SensitivityRow& r : rows)
        csv.row({r.shift_fraction, r.late_envelope, r.ratio_vs_unshifted});
    return rows;
}

} // namespace revivals::cli
