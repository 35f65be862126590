// laplace.hpp — frequency-domain route: nonlinear Lamb shift δ(ω) (principal
// value of F against 1/(ω-ω')), branch-cut kernel U(ω), graphical resonance
// condition, and the branch-cut reconstruction of A(t).

#pragma once

#include <complex>
#include <vector>

#include "revivals/dynamics.hpp"
#include "revivals/spectral.hpp"

namespace revivals::laplace {

// δ(ω) = PV ∫ F(ω')/(ω-ω') dω' over the truncation window, computed by
// singularity subtraction: ∫ [F(ω')-F(ω)]/(ω-ω') dω' + F(ω) ln|(ω-a)/(b-ω)|,
// with adaptive Gauss-Kronrod panels.
double lamb_shift(const spectral::SpectralFunction& f, double omega);

// Fixed-node evaluator for dense δ(ω) sampling: one composite Gauss-Legendre
// node set sized to F's structure (tooth widths, hole notches), applied to
// the same subtraction integrand. The x=ω pole is removable, so the
// integrand stays analytic in the strip of F and panels need no
// ω-dependent refinement; each evaluation is a single weighted pass over
// the precomputed nodes. Agreement with the adaptive route is covered by
// tests.
class LambShift {
public:
    explicit LambShift(const spectral::SpectralFunction& f);
    double operator()(double omega) const;

private:
    const spectral::SpectralFunction& f_;
    std::vector<double> x_;  // nodes
    std::vector<double> w_;  // weights
    std::vector<double> fx_; // F at nodes
    double a_, b_;
};

// Diagnostic/exported kernel, real and nonnegative:
//   U(ω) = F(ω) / [(ω-ω_c-Ω²δ(ω))² + (κ-γ+πΩ²F(ω))²].
double kernel_u(const spectral::SpectralFunction& f, double coupling,
                double kappa, double gamma, double omega);
double kernel_u(const spectral::SpectralFunction& f, double coupling,
                double kappa, double gamma, double omega, double delta_value);

// Branch-cut integrand with the exact complex denominator
//   F(ω) / [(ω-ω_c-Ω²δ(ω)+i(κ-γ))² + (πΩ²F(ω))²];
// reduces to kernel_u when κ=γ. This is the density whose Fourier transform
// (times Ω² and e^{-γt}) reconstructs A(t).
std::complex<double> branch_cut_density(const spectral::SpectralFunction& f,
                                        double coupling, double kappa,
                                        double gamma, double omega,
                                        double delta_value);

struct Resonance {
    double omega;   // root of δ(ω) = (ω-ω_c)/Ω²
    bool resonant;  // a U(ω) maximum lies within 2π·1 MHz
};

// All intersections of the Lamb shift with the line (ω-ω_c)/Ω², located by
// bisection on a dense scan, classified against the maxima of U.
std::vector<Resonance> find_resonances(const spectral::SpectralFunction& f,
                                       double coupling, double kappa,
                                       double gamma,
                                       double scan_step = omega_from_mhz(0.08));

struct LaplaceSpectrum {
    std::vector<double> omega;
    std::vector<double> delta;
    std::vector<double> u;
    std::vector<Resonance> resonances;
};

LaplaceSpectrum sample_spectrum(const spectral::SpectralFunction& f,
                                double coupling, double kappa, double gamma,
                                double grid_step = omega_from_mhz(0.05));

// A(t) = Ω² ∫ dω e^{-i(ω-ω_c-iγ)t} U(ω) over the branch cut, single-photon
// initial condition. Requires a hole-free F (pole contributions excluded).
dynamics::Trajectory
amplitude_from_laplace(const spectral::SpectralFunction& f, double coupling,
                       double kappa, double gamma,
                       const dynamics::TimeGrid& grid);

} // namespace revivals::laplace
