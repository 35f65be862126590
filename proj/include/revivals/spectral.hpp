// spectral.hpp — spin spectral density F(omega): q-Gaussian comb
// construction, Gaussian hole burning, and discretization into (omega_l, g_l)
// ensembles.

#pragma once

#include <memory>
#include <vector>

#include "revivals/units.hpp"

namespace revivals::spectral {

// Single sub-ensemble line shape
//   rho(w) = C * [1 - (1-q) (w - center)^2 / width^2]^(1/(1-q)),  1 < q < 3,
// with fwhm = 2*width*sqrt((2^q-2)/(2q-2)) and C normalizing rho over the
// real line.
class QGaussian {
public:
    QGaussian(double center, double fwhm, double q);

    double center() const { return center_; }
    double fwhm() const { return fwhm_; }
    double shape_q() const { return q_; }
    double width() const { return width_; }   // Δ
    double norm() const { return norm_; }     // C (peak value)

    double density(double omega) const;

    // One-sided mass beyond `halfwidth` from the center.
    double tail_mass(double halfwidth) const;
    // Smallest halfwidth whose two-sided tail mass is below `fraction`.
    double halfwidth_for_tail(double fraction) const;

private:
    double center_;
    double fwhm_;
    double q_;
    double width_;
    double norm_;
    double nu_;        // 1/(q-1)
    double tail_coef_; // Gamma(nu)/(sqrt(pi) Gamma(nu-1/2))
};

double q_gaussian_density(double omega, const QGaussian& params);

struct CombConfig {
    int ensembles = 7;                              // M, odd
    double spacing = omega_from_mhz(40.0);          // Δω
    double comb_center = omega_from_ghz(2.6915);    // ω_s
    double cavity = omega_from_ghz(2.6915);         // ω_c
    double weight_width = omega_from_mhz(150.0);    // σ_G
    double coupling = omega_from_mhz(26.0);         // Ω of the central ensemble
    double fwhm = omega_from_mhz(9.4);              // γ_q per ensemble
    double q = 1.2;
    double tail_fraction = 1.0e-6;                  // truncation-window rule
    double min_halfwidth = omega_from_mhz(300.0);   // window floor

    bool operator==(const CombConfig&) const = default;
};

struct HoleSpec {
    std::vector<double> centers; // absolute ω
    double fwhm;                 // Δ_h, shared
    double depth = 1.0;          // d ∈ [0,1]
};

struct Hole {
    double center;
    double sigma; // Δ_h / (2 sqrt(2 ln 2))
    double depth;
};

// Immutable once built; cheap to copy (teeth shared). Evaluation is
//   F(w) = sum_mu w_mu rho_mu(w)/eta_mu * prod_j [1 - d_j exp(-(w-c_j)^2/2s_j^2)]
// with eta_mu renormalizing each tooth over the truncation window.
class SpectralFunction {
public:
    double operator()(double omega) const;     // with holes
    double base_density(double omega) const;   // comb only
    double hole_attenuation(double omega) const;

    double window_lo() const { return window_lo_; }
    double window_hi() const { return window_hi_; }
    double total_weight() const { return total_weight_; } // Σ w_mu
    const CombConfig& comb() const { return cfg_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Hole>& holes() const { return holes_; }
    bool has_holes() const { return !holes_.empty(); }

    friend SpectralFunction build_spectral_function(const CombConfig& cfg);
    friend SpectralFunction apply_holes(const SpectralFunction& f,
                                        const HoleSpec& holes);

private:
    CombConfig cfg_;
    std::shared_ptr<const std::vector<QGaussian>> teeth_;
    std::vector<double> weights_;      // w_mu
    std::vector<double> renorm_;       // 1/eta_mu
    std::vector<Hole> holes_;
    double window_lo_{0.0};
    double window_hi_{0.0};
    double total_weight_{0.0};
};

SpectralFunction build_spectral_function(const CombConfig& cfg);

// Burns Gaussian notches; Δ_h is a FWHM. Holes with identical center and
// width coalesce (residual transmissions multiply), so re-burning a
// full-depth hole is an exact identity.
SpectralFunction apply_holes(const SpectralFunction& f, const HoleSpec& holes);

struct DiscreteEnsemble {
    std::vector<double> frequency; // ω_l, strictly increasing
    std::vector<double> coupling;  // g_l ≥ 0
    double coupling_norm2{0.0};    // Σ g_l²
    double window_lo{0.0};
    double window_hi{0.0};
};

// Uniform midpoint grid over [lo, hi] with
//   g_l = sqrt(F(ω_l) · Ω²·Σw_mu / Σ_m F_base(ω_m)).
// The normalizer uses the hole-free comb, so burning holes lowers Σ g_l².
DiscreteEnsemble discretize_ensemble(const SpectralFunction& f, int n,
                                     double window_lo, double window_hi);
DiscreteEnsemble discretize_ensemble(const SpectralFunction& f, int n);

} // namespace revivals::spectral
