// dynamics.cpp — RK4 integration of the coupled ODE system and Gregory
// product integration of the Volterra equation.

#include "revivals/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "revivals/errors.hpp"
#include "revivals/kernels.hpp"

namespace revivals::dynamics {

using cplx = std::complex<double>;

std::complex<double> DriveSignal::value(double t) const {
    if (none() || t < t0 || t >= t0 + duration)
        return {0.0, 0.0};
    if (detuning == 0.0)
        return {amplitude, 0.0};
    return amplitude * std::exp(cplx(0.0, -detuning * t));
}

DriveSignal rectangular_drive(double t0, double duration, double amplitude) {
    if (!(duration > 0.0))
        throw std::invalid_argument("drive duration must be positive");
    if (t0 < 0.0)
        throw std::invalid_argument("drive start must be nonnegative");
    return {t0, duration, amplitude, 0.0};
}

TimeGrid make_grid(double t_max, double step) {
    if (!(step > 0.0) || !(t_max > 0.0))
        throw std::invalid_argument("time grid requires positive span and step");
    TimeGrid g;
    g.step = step;
    g.steps = std::size_t(std::llround(t_max / step));
    if (g.steps < 1)
        g.steps = 1;
    return g;
}

const char* route_name(Route r) {
    switch (r) {
    case Route::ode:
        return "ode";
    case Route::volterra:
        return "volterra";
    case Route::laplace:
        return "laplace";
    }
    return "?";
}

// ---------------------------------- ODE ------------------------------------

namespace {

struct OdeState {
    cplx a;
    std::vector<double> br, bi;
};

class OdeSystem {
public:
    OdeSystem(const spectral::DiscreteEnsemble& ens, const SystemParams& p)
        : kappa_(p.kappa), gamma_(p.gamma), n_(ens.frequency.size()),
          delta_(n_), g_(ens.coupling) {
        for (std::size_t l = 0; l < n_; ++l)
            delta_[l] = ens.frequency[l] - p.cavity;
    }

    double max_detuning() const {
        double m = 0.0;
        for (double d : delta_)
            m = std::max(m, std::fabs(d));
        return m;
    }

    // k = f(state, t); eta evaluated by the caller (piecewise handling).
    void rhs(const OdeState& s, cplx eta, OdeState& k) const {
        const kern::Cplx cp = kern::spin_stage(
            n_, gamma_, delta_.data(), g_.data(), s.a.real(), s.a.imag(),
            s.br.data(), s.bi.data(), k.br.data(), k.bi.data());
        k.a = -kappa_ * s.a + cplx(cp.re, cp.im) - eta;
    }

    std::size_t size() const { return n_; }

private:
    double kappa_, gamma_;
    std::size_t n_;
    std::vector<double> delta_;
    std::vector<double> g_;
};

void stage_advance(const OdeState& y, double c, const OdeState& k,
                   OdeState& out) {
    out.a = y.a + c * k.a;
    kern::axpy(y.br.size(), c, k.br.data(), y.br.data(), out.br.data());
    kern::axpy(y.bi.size(), c, k.bi.data(), y.bi.data(), out.bi.data());
}

// One RK4 step over [t, t+h] during which the drive envelope is smooth.
void rk4_step(const OdeSystem& sys, const DriveSignal& drive, double t,
              double h, bool drive_on, OdeState& y, OdeState& k1, OdeState& k2,
              OdeState& k3, OdeState& k4, OdeState& tmp) {
    auto eta = [&](double tt) -> cplx {
        if (!drive_on)
            return {0.0, 0.0};
        if (drive.detuning == 0.0)
            return {drive.amplitude, 0.0};
        return drive.amplitude * std::exp(cplx(0.0, -drive.detuning * tt));
    };
    sys.rhs(y, eta(t), k1);
    stage_advance(y, 0.5 * h, k1, tmp);
    sys.rhs(tmp, eta(t + 0.5 * h), k2);
    stage_advance(y, 0.5 * h, k2, tmp);
    sys.rhs(tmp, eta(t + 0.5 * h), k3);
    stage_advance(y, h, k3, tmp);
    sys.rhs(tmp, eta(t + h), k4);
    const std::size_t n = y.br.size();
    y.a += (h / 6.0) * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    for (std::size_t l = 0; l < n; ++l) {
        y.br[l] += (h / 6.0) *
                   (k1.br[l] + 2.0 * k2.br[l] + 2.0 * k3.br[l] + k4.br[l]);
        y.bi[l] += (h / 6.0) *
                   (k1.bi[l] + 2.0 * k2.bi[l] + 2.0 * k3.bi[l] + k4.bi[l]);
    }
}

} // namespace

Trajectory integrate_ode(const spectral::DiscreteEnsemble& ens,
                         const SystemParams& p, const DriveSignal& drive,
                         cplx a0, const std::vector<cplx>& b0,
                         const TimeGrid& grid, const OdeOptions& opts) {
    const std::size_t n = ens.frequency.size();
    if (!b0.empty() && b0.size() != n)
        throw std::invalid_argument("initial spin vector size mismatch");

    OdeSystem sys(ens, p);
    const double dmax = sys.max_detuning();
    if (grid.step * dmax >= 0.1)
        throw numeric_error(
            "ODE step too large for the fastest detuning: h*max|w_l-w_c| = " +
            std::to_string(grid.step * dmax) + " >= 0.1; need step < " +
            std::to_string(0.1 / dmax) + " us");

    OdeState y{a0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t l = 0; l < b0.size(); ++l) {
        y.br[l] = b0[l].real();
        y.bi[l] = b0[l].imag();
    }
    auto blank = [&] {
        return OdeState{cplx(0, 0), std::vector<double>(n, 0.0),
                        std::vector<double>(n, 0.0)};
    };
    OdeState k1 = blank(), k2 = blank(), k3 = blank(), k4 = blank(),
             tmp = blank();

    Trajectory traj;
    traj.grid = grid;
    traj.route = Route::ode;
    traj.a0 = a0;
    traj.driven = !drive.none();
    traj.spins_initially_zero = b0.empty() ||
        std::all_of(b0.begin(), b0.end(),
                    [](cplx z) { return z == cplx(0.0, 0.0); });
    traj.kappa = p.kappa;
    traj.a.resize(grid.size());
    if (opts.record_spin_norm)
        traj.spin_norm2.resize(grid.size());

    // Piecewise integration: split steps at the drive's on/off edges so RK4
    // never straddles a discontinuity.
    const double t_on = drive.t0;
    const double t_off = drive.t0 + drive.duration;
    const bool has_drive = !drive.none();

    traj.a[0] = y.a;
    if (opts.record_spin_norm)
        traj.spin_norm2[0] = kern::norm2(n, y.br.data(), y.bi.data());

    for (std::size_t i = 0; i < grid.steps; ++i) {
        double t = grid.time(i);
        const double t_end = grid.time(i + 1);
        while (t < t_end - 1e-15 * grid.step) {
            double t_next = t_end;
            bool drive_on = false;
            if (has_drive) {
                if (t < t_on - 1e-15) {
                    t_next = std::min(t_end, t_on);
                } else if (t < t_off - 1e-15) {
                    drive_on = true;
                    t_next = std::min(t_end, t_off);
                }
            }
            rk4_step(sys, drive, t, t_next - t, drive_on, y, k1, k2, k3, k4,
                     tmp);
            t = t_next;
        }
        traj.a[i + 1] = y.a;
        if (opts.record_spin_norm)
            traj.spin_norm2[i + 1] = kern::norm2(n, y.br.data(), y.bi.data());
    }
    if (opts.record_spins_final) {
        traj.spins_final.resize(n);
        for (std::size_t l = 0; l < n; ++l)
            traj.spins_final[l] = cplx(y.br[l], y.bi[l]);
    }
    return traj;
}

// -------------------------------- Volterra ---------------------------------

namespace {

// Quadrature nodes for the kernel integral. A uniform rule is exponentially
// accurate here because the integrand is analytic in a strip: the q-Gaussian
// branch points sit at Im w = ±Δ/sqrt(q-1), hole notches are entire, and the
// (e^{-zΔt}-1)/z factor is entire. The node spacing keeps the trapezoid
// image terms (lag aliases at 2π/dω) beyond the kernel's decay range for the
// longest requested lag. An even node count keeps the removable z=0 point
// (γ=κ at ω=ω_c) off the grid.
struct KernelNodes {
    std::vector<double> cr, ci; // dω·F(ω_j)/z_j
    std::vector<double> sr, si; // e^{-z_j h}
};

KernelNodes make_kernel_nodes(const spectral::SpectralFunction& f,
                              const SystemParams& p, double t_max,
                              double step, double spacing_cap) {
    double dw = std::min(0.4, revivals::two_pi / (t_max + 10.0));
    for (const spectral::Hole& h : f.holes())
        dw = std::min(dw, h.sigma / 2.5);
    dw = std::min(dw, spacing_cap);
    const double lo = f.window_lo();
    const double hi = f.window_hi();
    std::size_t m = std::size_t(std::ceil((hi - lo) / dw));
    m += m % 2; // even
    dw = (hi - lo) / double(m);

    KernelNodes nodes;
    nodes.cr.resize(m);
    nodes.ci.resize(m);
    nodes.sr.resize(m);
    nodes.si.resize(m);
    const double gk = p.gamma - p.kappa;
    for (std::size_t j = 0; j < m; ++j) {
        const double w = lo + (double(j) + 0.5) * dw;
        const cplx z(gk, w - p.cavity);
        const cplx c = dw * f(w) / z;
        nodes.cr[j] = c.real();
        nodes.ci[j] = c.imag();
        const cplx s = std::exp(-z * step);
        nodes.sr[j] = s.real();
        nodes.si[j] = s.imag();
    }
    return nodes;
}

std::vector<cplx> kernel_samples(const spectral::SpectralFunction& f,
                                 const SystemParams& p, double coupling,
                                 const TimeGrid& lags, double spacing_cap) {
    KernelNodes nodes =
        make_kernel_nodes(f, p, lags.span(), lags.step, spacing_cap);
    const std::size_t m = nodes.cr.size();
    std::vector<double> pr(m, 1.0), pi(m, 0.0);
    std::vector<cplx> k(lags.size());
    k[0] = cplx(0.0, 0.0);
    const double om2 = coupling * coupling;
    for (std::size_t i = 1; i < lags.size(); ++i) {
        const kern::Cplx acc =
            kern::phasor_step(m, nodes.cr.data(), nodes.ci.data(), pr.data(),
                              pi.data(), nodes.sr.data(), nodes.si.data());
        const double damp = om2 * std::exp(-p.kappa * lags.time(i));
        k[i] = cplx(damp * acc.re, damp * acc.im);
    }
    return k;
}

// D(t) = -∫_0^t η(τ) e^{-κ(t-τ)} dτ for the rectangular drive, closed form.
cplx drive_term(const DriveSignal& d, double kappa, double t) {
    if (d.none() || t <= d.t0)
        return {0.0, 0.0};
    const double m = std::min(t, d.t0 + d.duration);
    const cplx r(kappa, -d.detuning);
    if (std::abs(r) < 1e-12)
        return -d.amplitude * (m - d.t0);
    // -(α/r)[e^{-κ(t-m)} e^{-iν m} - e^{-κ(t-t0)} e^{-iν t0}]
    const cplx upper = std::exp(cplx(-kappa * (t - m), -d.detuning * m));
    const cplx lower = std::exp(cplx(-kappa * (t - d.t0), -d.detuning * d.t0));
    return -(d.amplitude / r) * (upper - lower);
}

constexpr double gregory_c0 = 3.0 / 8.0;
constexpr double gregory_c1 = 7.0 / 6.0;
constexpr double gregory_c2 = 23.0 / 24.0;

} // namespace

std::vector<cplx> volterra_kernel(const spectral::SpectralFunction& f,
                                  const SystemParams& p, double coupling,
                                  const TimeGrid& lags,
                                  double node_spacing_cap) {
    return kernel_samples(f, p, coupling, lags, node_spacing_cap);
}

Trajectory solve_volterra(const spectral::SpectralFunction& f,
                          const SystemParams& p, double coupling,
                          const DriveSignal& drive, cplx a0,
                          const TimeGrid& grid, const std::vector<cplx>& b0) {
    for (const cplx& z : b0)
        if (z != cplx(0.0, 0.0))
            throw std::invalid_argument(
                "solve_volterra requires all spins initially in the ground "
                "state; use integrate_ode for excited initial spins");

    const std::size_t t_count = grid.size();
    const std::vector<cplx> k = volterra_kernel(f, p, coupling, grid);

    // Reversed kernel copy so the history sum is a contiguous forward dot:
    //   U_i = Σ_{j=0}^{i-1} K_{i-j} A_j = Σ_j krev[T-i+j] · A_j.
    const std::size_t t_last = grid.steps;
    std::vector<double> krev_re(t_count), krev_im(t_count);
    for (std::size_t x = 0; x < t_count; ++x) {
        krev_re[x] = k[t_last - x].real();
        krev_im[x] = k[t_last - x].imag();
    }
    std::vector<double> a_re(t_count, 0.0), a_im(t_count, 0.0);

    Trajectory traj;
    traj.grid = grid;
    traj.route = Route::volterra;
    traj.a0 = a0;
    traj.driven = !drive.none();
    traj.kappa = p.kappa;
    traj.a.resize(t_count);
    traj.a[0] = a0;
    a_re[0] = a0.real();
    a_im[0] = a0.imag();

    const double h = grid.step;
    for (std::size_t i = 1; i <= t_last; ++i) {
        const kern::Cplx u = kern::cdot(a_re.data(), a_im.data(),
                                        krev_re.data() + (t_last - i),
                                        krev_im.data() + (t_last - i), i);
        cplx s(u.re, u.im);
        if (i >= 6) {
            // Order-4 Gregory end corrections at both ends of [0, t_i];
            // the j=i mirror term vanishes with K(0)=0.
            const cplx a_0(a_re[0], a_im[0]);
            const cplx a_1(a_re[1], a_im[1]);
            const cplx a_2(a_re[2], a_im[2]);
            const cplx a_i1(a_re[i - 1], a_im[i - 1]);
            const cplx a_i2(a_re[i - 2], a_im[i - 2]);
            s += (gregory_c0 - 1.0) * k[i] * a_0;
            s += (gregory_c1 - 1.0) * (k[i - 1] * a_1 + k[1] * a_i1);
            s += (gregory_c2 - 1.0) * (k[i - 2] * a_2 + k[2] * a_i2);
        } else {
            // Trapezoid start; the integral is O(t_i²) here so the local
            // error is far below the target order.
            s -= 0.5 * k[i] * cplx(a_re[0], a_im[0]);
        }
        const cplx ai = a0 * std::exp(-p.kappa * grid.time(i)) +
                        drive_term(drive, p.kappa, grid.time(i)) + h * s;
        a_re[i] = ai.real();
        a_im[i] = ai.imag();
        traj.a[i] = ai;
    }
    return traj;
}

// --------------------------------- Metrics ---------------------------------

std::vector<double> single_photon_occupation(const Trajectory& traj) {
    if (traj.driven)
        throw std::invalid_argument(
            "single-photon occupation is undefined for driven trajectories");
    if (traj.a0 != cplx(1.0, 0.0) || !traj.spins_initially_zero)
        throw std::invalid_argument(
            "single-photon occupation requires A(0)=1 and unexcited spins");
    std::vector<double> n(traj.a.size());
    for (std::size_t i = 0; i < traj.a.size(); ++i)
        n[i] = std::norm(traj.a[i]);
    return n;
}

PulseMetrics pulse_metrics(const Trajectory& traj, double kappa,
                           double nominal_spacing) {
    if (traj.a.size() < 3)
        throw std::invalid_argument("pulse metrics require a trajectory");
    const std::size_t count = traj.a.size();
    std::vector<double> abs2(count);
    double vmax = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        abs2[i] = std::norm(traj.a[i]);
        vmax = std::max(vmax, abs2[i]);
    }

    PulseMetrics pm;
    pm.abs2_max = vmax;
    pm.nominal_spacing = nominal_spacing;
    const double min_sep = 0.5 * nominal_spacing;

    for (std::size_t i = 1; i + 1 < count; ++i) {
        if (!(abs2[i] >= abs2[i - 1] && abs2[i] > abs2[i + 1]))
            continue;
        const double t = traj.grid.time(i);
        if (!pm.pulses.empty() && t - pm.pulses.back().t < min_sep) {
            if (abs2[i] > pm.pulses.back().abs2) {
                pm.pulses.back() = {i, t, abs2[i], abs2[i] / vmax,
                                    abs2[i] / vmax > std::exp(-kappa * t)};
            }
            continue;
        }
        pm.pulses.push_back({i, t, abs2[i], abs2[i] / vmax,
                             abs2[i] / vmax > std::exp(-kappa * t)});
    }
    return pm;
}

std::size_t PulseMetrics::count_above(double t_max) const {
    std::size_t c = 0;
    for (const Pulse& p : pulses)
        if (p.t <= t_max && p.above_barrier)
            ++c;
    return c;
}

double PulseMetrics::barrier_ratio_near(double t, double lookback,
                                        double kappa) const {
    double best = 0.0;
    for (const Pulse& p : pulses)
        if (p.t >= t - lookback && p.t <= t)
            best = std::max(best, p.normalized * std::exp(kappa * p.t));
    return best;
}

double PulseMetrics::late_envelope(double t_min) const {
    double best = 0.0;
    for (const Pulse& p : pulses)
        if (p.t > t_min)
            best = std::max(best, p.abs2);
    return best;
}

} // namespace revivals::dynamics
