// spectral.cpp — q-Gaussian comb, hole burning, discretization.

#include "revivals/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "revivals/errors.hpp"
#include "revivals/quadrature.hpp"

namespace revivals::spectral {

QGaussian::QGaussian(double center, double fwhm, double q)
    : center_(center), fwhm_(fwhm), q_(q) {
    if (!(q > 1.0 && q < 3.0))
        throw std::invalid_argument(
            "q-Gaussian shape parameter must satisfy 1 < q < 3, got q=" +
            std::to_string(q));
    if (!(fwhm > 0.0))
        throw std::invalid_argument("q-Gaussian FWHM must be positive");
    nu_ = 1.0 / (q - 1.0);
    width_ = fwhm / (2.0 * std::sqrt((std::exp2(q) - 2.0) / (2.0 * q - 2.0)));
    // C = sqrt(q-1) Gamma(nu) / (sqrt(pi) Δ Gamma(nu - 1/2))
    const double logc = 0.5 * std::log(q - 1.0) - std::log(width_) -
                        0.5 * std::log(M_PI) + std::lgamma(nu_) -
                        std::lgamma(nu_ - 0.5);
    norm_ = std::exp(logc);
    tail_coef_ = std::exp(std::lgamma(nu_) - std::lgamma(nu_ - 0.5)) /
                 std::sqrt(M_PI);
}

double QGaussian::density(double omega) const {
    const double x = omega - center_;
    const double u2 = (q_ - 1.0) * x * x / (width_ * width_);
    return norm_ * std::pow(1.0 + u2, -nu_);
}

double QGaussian::tail_mass(double halfwidth) const {
    // ∫_{X}^{∞} rho = tail_coef * ∫_0^{1/uX} v^{2nu-2} (1+v²)^{-nu} dv
    // (substitution v = 1/u with uX = X sqrt(q-1)/Δ).
    const double ux = halfwidth * std::sqrt(q_ - 1.0) / width_;
    if (ux <= 0.0)
        return 0.5;
    const double vmax = 1.0 / ux;
    auto integrand = [&](double v) {
        return std::pow(v, 2.0 * nu_ - 2.0) * std::pow(1.0 + v * v, -nu_);
    };
    auto r = quad::integrate(integrand, 0.0, vmax, 1.0e-12, 1.0e-300);
    return tail_coef_ * r.value;
}

double QGaussian::halfwidth_for_tail(double fraction) const {
    double lo = width_;
    double hi = width_;
    while (2.0 * tail_mass(hi) > fraction)
        hi *= 2.0;
    while (2.0 * tail_mass(lo) < fraction && lo > 1e-12 * width_)
        lo *= 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (2.0 * tail_mass(mid) > fraction ? lo : hi) = mid;
    }
    return hi;
}

double q_gaussian_density(double omega, const QGaussian& params) {
    return params.density(omega);
}

namespace {

double comb_tail_outside(const std::vector<QGaussian>& teeth,
                         const std::vector<double>& weights, double center,
                         double halfwidth) {
    double mass = 0.0;
    for (std::size_t m = 0; m < teeth.size(); ++m) {
        const double off = teeth[m].center() - center;
        mass += weights[m] * (teeth[m].tail_mass(halfwidth - off) +
                              teeth[m].tail_mass(halfwidth + off));
    }
    return mass;
}

} // namespace

SpectralFunction build_spectral_function(const CombConfig& cfg) {
    if (cfg.ensembles < 1 || cfg.ensembles % 2 == 0)
        throw std::invalid_argument(
            "comb requires an odd ensemble count (central ensemble), got M=" +
            std::to_string(cfg.ensembles));
    if (!(cfg.spacing > 0.0) && cfg.ensembles > 1)
        throw std::invalid_argument("comb spacing must be positive");
    if (!(cfg.weight_width > 0.0))
        throw std::invalid_argument("comb weight width sigma_G must be positive");
    if (!(cfg.coupling >= 0.0))
        throw std::invalid_argument("collective coupling must be nonnegative");

    SpectralFunction f;
    f.cfg_ = cfg;
    auto teeth = std::make_shared<std::vector<QGaussian>>();
    const int half = (cfg.ensembles - 1) / 2;
    double wsum = 0.0;
    for (int n = -half; n <= half; ++n) {
        const double offset = n * cfg.spacing;
        teeth->emplace_back(cfg.comb_center + offset, cfg.fwhm, cfg.q);
        // Weights anchored to the comb offsets: equals
        // exp[-(ω_c-ω_s^(μ))²/2σ_G²] in the resonant configuration and keeps
        // the shape fixed when the comb is translated.
        const double w =
            std::exp(-offset * offset / (2.0 * cfg.weight_width * cfg.weight_width));
        f.weights_.push_back(w);
        wsum += w;
    }
    f.teeth_ = teeth;
    f.total_weight_ = wsum;

    // Truncation window: smallest halfwidth with relative discarded mass
    // below tail_fraction, but never below the configured floor.
    double w_hi = cfg.min_halfwidth;
    if (comb_tail_outside(*teeth, f.weights_, cfg.comb_center, w_hi) >
        cfg.tail_fraction * wsum) {
        double lo = w_hi;
        double hi = w_hi;
        while (comb_tail_outside(*teeth, f.weights_, cfg.comb_center, hi) >
               cfg.tail_fraction * wsum)
            hi *= 1.5;
        for (int it = 0; it < 100 && (hi - lo) > 1e-6 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (comb_tail_outside(*teeth, f.weights_, cfg.comb_center, mid) >
                cfg.tail_fraction * wsum)
                lo = mid;
            else
                hi = mid;
        }
        w_hi = hi;
    }
    f.window_lo_ = cfg.comb_center - w_hi;
    f.window_hi_ = cfg.comb_center + w_hi;

    // Per-tooth renormalization over the window so each rho integrates to 1
    // on [window_lo, window_hi].
    for (std::size_t m = 0; m < teeth->size(); ++m) {
        const double off = (*teeth)[m].center() - cfg.comb_center;
        const double eta = 1.0 - (*teeth)[m].tail_mass(w_hi - off) -
                           (*teeth)[m].tail_mass(w_hi + off);
        f.renorm_.push_back(1.0 / eta);
    }
    return f;
}

double SpectralFunction::base_density(double omega) const {
    double s = 0.0;
    for (std::size_t m = 0; m < teeth_->size(); ++m)
        s += weights_[m] * renorm_[m] * (*teeth_)[m].density(omega);
    return s;
}

double SpectralFunction::hole_attenuation(double omega) const {
    double p = 1.0;
    for (const Hole& h : holes_) {
        const double x = omega - h.center;
        p *= 1.0 - h.depth * std::exp(-x * x / (2.0 * h.sigma * h.sigma));
    }
    return p;
}

double SpectralFunction::operator()(double omega) const {
    const double base = base_density(omega);
    return holes_.empty() ? base : base * hole_attenuation(omega);
}

SpectralFunction apply_holes(const SpectralFunction& f, const HoleSpec& spec) {
    if (!(spec.fwhm > 0.0) && !spec.centers.empty())
        throw std::invalid_argument("hole FWHM must be positive");
    if (!(spec.depth >= 0.0 && spec.depth <= 1.0))
        throw std::invalid_argument("hole depth must lie in [0,1], got " +
                                    std::to_string(spec.depth));
    SpectralFunction out = f;
    const double sigma = spec.fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    for (double c : spec.centers) {
        if (c < f.window_lo_ || c > f.window_hi_)
            throw std::invalid_argument(
                "hole center lies outside the truncation window");
        auto same = std::find_if(out.holes_.begin(), out.holes_.end(),
                                 [&](const Hole& h) {
                                     return h.center == c && h.sigma == sigma;
                                 });
        if (same != out.holes_.end())
            same->depth = 1.0 - (1.0 - same->depth) * (1.0 - spec.depth);
        else
            out.holes_.push_back({c, sigma, spec.depth});
    }
    return out;
}

DiscreteEnsemble discretize_ensemble(const SpectralFunction& f, int n,
                                     double window_lo, double window_hi) {
    if (n < 2)
        throw std::invalid_argument("discretization requires N >= 2");
    if (window_lo < f.window_lo() - 1e-9 || window_hi > f.window_hi() + 1e-9 ||
        window_lo >= window_hi)
        throw std::invalid_argument(
            "discretization window must lie inside the truncation window");

    DiscreteEnsemble ens;
    ens.window_lo = window_lo;
    ens.window_hi = window_hi;
    ens.frequency.resize(n);
    ens.coupling.resize(n);
    const double dw = (window_hi - window_lo) / n;
    double sum_holes = 0.0;
    double sum_base = 0.0;
    std::vector<double> fh(n);
    for (int l = 0; l < n; ++l) {
        const double w = window_lo + (l + 0.5) * dw;
        ens.frequency[l] = w;
        fh[l] = f(w);
        sum_holes += fh[l];
        sum_base += f.base_density(w);
    }
    if (!(sum_base > 0.0))
        throw numeric_error("spectral function vanishes on the whole window; "
                            "cannot discretize");
    const double omega = f.comb().coupling;
    const double scale = omega * omega * f.total_weight() / sum_base;
    double norm2 = 0.0;
    for (int l = 0; l < n; ++l) {
        ens.coupling[l] = std::sqrt(fh[l] * scale);
        norm2 += ens.coupling[l] * ens.coupling[l];
    }
    ens.coupling_norm2 = norm2;
    return ens;
}

DiscreteEnsemble discretize_ensemble(const SpectralFunction& f, int n) {
    return discretize_ensemble(f, n, f.window_lo(), f.window_hi());
}

} // namespace revivals::spectral
