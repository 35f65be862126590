// laplace.cpp — Lamb shift, kernel U, resonance location, branch-cut
// reconstruction.

#include "revivals/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "revivals/errors.hpp"
#include "revivals/kernels.hpp"
#include "revivals/quadrature.hpp"

namespace revivals::laplace {

using cplx = std::complex<double>;

double lamb_shift(const spectral::SpectralFunction& f, double omega) {
    const double a = f.window_lo();
    const double b = f.window_hi();
    if (omega <= a || omega >= b) {
        // No singularity inside the support: direct integral.
        auto r = quad::integrate([&](double w) { return f(w) / (omega - w); },
                                 a, b, 1.0e-9, 1.0e-14);
        return r.value;
    }
    const double f0 = f(omega);
    auto integrand = [&](double w) {
        const double d = omega - w;
        if (std::fabs(d) < 1e-9) {
            const double eps = 1e-5;
            return -(f(omega + eps) - f(omega - eps)) / (2.0 * eps);
        }
        return (f(w) - f0) / d;
    };
    // Split at ω so the subtraction kink sits on a panel boundary.
    auto left = quad::integrate(integrand, a, omega, 1.0e-8, 1.0e-13);
    auto right = quad::integrate(integrand, omega, b, 1.0e-8, 1.0e-13);
    if (!left.converged || !right.converged)
        throw numeric_error("Lamb shift quadrature did not converge");
    return left.value + right.value + f0 * std::log((omega - a) / (b - omega));
}

LambShift::LambShift(const spectral::SpectralFunction& f)
    : f_(f), a_(f.window_lo()), b_(f.window_hi()) {
    // Breakpoints tracking F's structure: geometric rings around each tooth
    // and each hole notch, plus a global cap on panel width.
    std::set<double> cuts{a_, b_};
    const auto& cfg = f.comb();
    const spectral::QGaussian probe(0.0, cfg.fwhm, cfg.q);
    const double tooth_width = probe.width();
    const int half = (cfg.ensembles - 1) / 2;
    for (int n = -half; n <= half; ++n) {
        const double c = cfg.comb_center + n * cfg.spacing;
        for (double r : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            for (double s : {-1.0, 1.0}) {
                const double x = c + s * r * tooth_width;
                if (x > a_ && x < b_)
                    cuts.insert(x);
            }
        }
    }
    for (const spectral::Hole& h : f.holes()) {
        for (double r : {0.0, 1.0, 2.0, 4.0, 8.0}) {
            for (double s : {-1.0, 1.0}) {
                const double x = h.center + s * r * h.sigma;
                if (x > a_ && x < b_)
                    cuts.insert(x);
            }
        }
    }
    std::vector<double> edges(cuts.begin(), cuts.end());
    const double cap = 0.6 * tooth_width;
    std::vector<double> refined{edges.front()};
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const double w = edges[i] - edges[i - 1];
        const int splits = std::max(1, int(std::ceil(w / cap)));
        for (int s = 1; s <= splits; ++s)
            refined.push_back(edges[i - 1] + w * double(s) / splits);
    }

    const quad::GaussLegendre gl = quad::gauss_legendre(16);
    for (std::size_t p = 1; p < refined.size(); ++p) {
        const double lo = refined[p - 1];
        const double hi = refined[p];
        const double c = 0.5 * (lo + hi);
        const double hw = 0.5 * (hi - lo);
        for (int j = 0; j < 16; ++j) {
            x_.push_back(c + hw * gl.node[j]);
            w_.push_back(hw * gl.weight[j]);
        }
    }
    fx_.resize(x_.size());
    for (std::size_t j = 0; j < x_.size(); ++j)
        fx_[j] = f(x_[j]);
}

double LambShift::operator()(double omega) const {
    const double f0 = f_(omega);
    const double s = kern::pv_accumulate(x_.size(), w_.data(), fx_.data(), f0,
                                         x_.data(), omega);
    if (!std::isfinite(s)) // ω collided with a quadrature node
        return lamb_shift(f_, omega);
    return s + f0 * std::log(std::fabs((omega - a_) / (omega - b_)));
}

double kernel_u(const spectral::SpectralFunction& f, double coupling,
                double kappa, double gamma, double omega, double delta_value) {
    const double fw = f(omega);
    const double x = omega - f.comb().cavity - coupling * coupling * delta_value;
    const double y = kappa - gamma + M_PI * coupling * coupling * fw;
    return fw / (x * x + y * y);
}

double kernel_u(const spectral::SpectralFunction& f, double coupling,
                double kappa, double gamma, double omega) {
    return kernel_u(f, coupling, kappa, gamma, omega, lamb_shift(f, omega));
}

cplx branch_cut_density(const spectral::SpectralFunction& f, double coupling,
                        double kappa, double gamma, double omega,
                        double delta_value) {
    const double fw = f(omega);
    const cplx x(omega - f.comb().cavity - coupling * coupling * delta_value,
                 kappa - gamma);
    const double pf = M_PI * coupling * coupling * fw;
    return fw / (x * x + pf * pf);
}

std::vector<Resonance> find_resonances(const spectral::SpectralFunction& f,
                                       double coupling, double kappa,
                                       double gamma, double scan_step) {
    const double a = f.window_lo();
    const double b = f.window_hi();
    const double wc = f.comb().cavity;
    const double om2 = coupling * coupling;
    const LambShift delta(f);
    const std::size_t n = std::size_t((b - a) / scan_step) + 1;

    std::vector<double> ws(n), u(n), hfun(n);
    for (std::size_t i = 0; i < n; ++i) {
        ws[i] = a + (double(i) + 0.5) * (b - a) / double(n);
        const double d = delta(ws[i]);
        u[i] = kernel_u(f, coupling, kappa, gamma, ws[i], d);
        hfun[i] = d - (ws[i] - wc) / om2;
    }

    // Maxima of U on the scan grid classify intersections as resonant.
    std::vector<double> u_peaks;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (u[i] >= u[i - 1] && u[i] > u[i + 1])
            u_peaks.push_back(ws[i]);

    std::vector<Resonance> out;
    const double match_window = omega_from_mhz(1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if ((hfun[i] > 0.0) == (hfun[i + 1] > 0.0))
            continue;
        double lo = ws[i], hi = ws[i + 1];
        double flo = hfun[i];
        for (int it = 0; it < 60 && (hi - lo) > 1e-6 * scan_step; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = delta(mid) - (mid - wc) / om2;
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        bool res = false;
        for (double pk : u_peaks)
            if (std::fabs(pk - root) < match_window) {
                res = true;
                break;
            }
        out.push_back({root, res});
    }
    return out;
}

LaplaceSpectrum sample_spectrum(const spectral::SpectralFunction& f,
                                double coupling, double kappa, double gamma,
                                double grid_step) {
    LaplaceSpectrum sp;
    const double a = f.window_lo();
    const double b = f.window_hi();
    const LambShift delta(f);
    const std::size_t n = std::size_t((b - a) / grid_step) + 1;
    sp.omega.resize(n);
    sp.delta.resize(n);
    sp.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sp.omega[i] = a + (double(i) + 0.5) * (b - a) / double(n);
        sp.delta[i] = delta(sp.omega[i]);
        sp.u[i] = kernel_u(f, coupling, kappa, gamma, sp.omega[i], sp.delta[i]);
    }
    sp.resonances = find_resonances(f, coupling, kappa, gamma);
    return sp;
}

dynamics::Trajectory
amplitude_from_laplace(const spectral::SpectralFunction& f, double coupling,
                       double kappa, double gamma,
                       const dynamics::TimeGrid& grid) {
    if (f.has_holes())
        throw std::invalid_argument(
            "Laplace reconstruction excludes pole contributions and supports "
            "hole-free spectra only; use the time-domain solvers");

    const double a = f.window_lo();
    const double b = f.window_hi();
    const double wc = f.comb().cavity;
    const double om2 = coupling * coupling;
    const LambShift delta(f);

    // Node spacing: ≥20 samples per fastest oscillation e^{-i(ω-ω_c)t_max}
    // and fine enough for the narrowest polariton line (~(κ-γ)/2 scale).
    const double t_max = std::max(grid.span(), grid.step);
    const double dv = std::min(0.4, revivals::two_pi / (20.0 * t_max));
    const std::size_t m = std::size_t(std::ceil((b - a) / dv)) + 1;

    std::vector<double> cr(m), ci(m), sr(m), si(m), pr(m, 1.0), pi(m, 0.0);
    const double dw = (b - a) / double(m - 1);
    cplx total(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double w = a + double(j) * dw;
        const double trap = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        const cplx c = om2 * trap * dw *
                       branch_cut_density(f, coupling, kappa, gamma, w,
                                          delta(w));
        cr[j] = c.real();
        ci[j] = c.imag();
        total += c;
        const cplx s = std::exp(cplx(0.0, -(w - wc) * grid.step));
        sr[j] = s.real();
        si[j] = s.imag();
    }

    dynamics::Trajectory traj;
    traj.grid = grid;
    traj.route = dynamics::Route::laplace;
    traj.a0 = total; // Ω²∫U dω; ≈1 by branch-cut completeness
    traj.driven = false;
    traj.kappa = kappa;
    traj.a.resize(grid.size());
    traj.a[0] = total;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const kern::Cplx acc = kern::phasor_step(m, cr.data(), ci.data(),
                                                 pr.data(), pi.data(),
                                                 sr.data(), si.data());
        // phasor_step returns Σc(P-1); add Σc to recover ΣcP.
        const cplx undamped = cplx(acc.re, acc.im) + total;
        traj.a[i] = undamped * std::exp(-gamma * grid.time(i));
    }
    return traj;
}

} // namespace revivals::laplace
