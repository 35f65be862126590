// dynamics.hpp — time evolution of the rotating-frame cavity amplitude A(t)
// by two independent routes: the discretized linear ODE system (fixed-step
// RK4) and the Volterra integral equation with a precomputed memory kernel
// (order-4 Gregory product integration).

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "revivals/spectral.hpp"

namespace revivals::dynamics {

struct SystemParams {
    double kappa = omega_from_mhz(0.4);   // cavity HWHM loss
    double gamma = omega_from_mhz(0.01);  // spin HWHM loss
    double cavity = omega_from_ghz(2.6915);
    double pump = omega_from_ghz(2.6915); // drive carrier ω_p

    bool operator==(const SystemParams&) const = default;
};

// Rectangular drive envelope: η(t) = amplitude on [t0, t0+duration), else 0.
// In the ω_c rotating frame the envelope carries the residual phase
// exp(-i (ω_p - ω_c) t) when the carrier is detuned from the cavity.
struct DriveSignal {
    double t0 = 0.0;        // us
    double duration = 0.0;  // us; 0 with amplitude 0 = no drive
    double amplitude = 0.0; // arbitrary linear units
    double detuning = 0.0;  // ω_p - ω_c

    bool none() const { return amplitude == 0.0 || duration == 0.0; }
    std::complex<double> value(double t) const;
};

DriveSignal rectangular_drive(double t0, double duration, double amplitude);

struct TimeGrid {
    double step = 5.0e-5; // us (0.05 ns)
    std::size_t steps = 0;

    double time(std::size_t i) const { return double(i) * step; }
    double span() const { return double(steps) * step; }
    std::size_t size() const { return steps + 1; }
};

TimeGrid make_grid(double t_max, double step);

enum class Route { ode, volterra, laplace };
const char* route_name(Route r);

struct Trajectory {
    TimeGrid grid;
    std::vector<std::complex<double>> a;
    Route route{Route::ode};
    std::complex<double> a0{0.0, 0.0};
    bool driven{false};
    bool spins_initially_zero{true};
    double kappa{0.0};
    // Σ_l |B_l(t_i)|² when requested from the ODE route.
    std::vector<double> spin_norm2;
    std::vector<std::complex<double>> spins_final;

    double abs2(std::size_t i) const { return std::norm(a[i]); }
};

struct OdeOptions {
    bool record_spin_norm = false;
    bool record_spins_final = false;
};

// Ȧ = -κA + Σ_l g_l B_l - η(t),  Ḃ_l = -[γ + i(ω_l-ω_c)]B_l - g_l A.
// Requires step*max|ω_l-ω_c| < 0.1 (step-size error otherwise). b0 empty
// means all spins in the ground state.
Trajectory integrate_ode(const spectral::DiscreteEnsemble& ens,
                         const SystemParams& p, const DriveSignal& drive,
                         std::complex<double> a0,
                         const std::vector<std::complex<double>>& b0,
                         const TimeGrid& grid, const OdeOptions& opts = {});

// Memory kernel on a uniform lag grid:
//   K(Δt) = Ω² e^{-κΔt} ∫ dω F(ω) [e^{-i(ω-ω_c-i(γ-κ))Δt} - 1]
//                               / [i(ω-ω_c-i(γ-κ))],
// evaluated by an exponentially convergent uniform rule with a per-node
// phasor recursion across lags; K(0) = 0 exactly.
// node_spacing_cap tightens the ω grid beyond the built-in rule (used by
// convergence tests).
std::vector<std::complex<double>>
volterra_kernel(const spectral::SpectralFunction& f, const SystemParams& p,
                double coupling, const TimeGrid& lags,
                double node_spacing_cap = 0.4);

// Solves A(t) = A(0) e^{-κt} + ∫_0^t K(t-τ) A(τ) dτ + D(t) with
// D(t) = -∫_0^t η(τ) e^{-κ(t-τ)} dτ (analytic for rectangular drives).
// Spins must start in the ground state; pass nonzero b0 to integrate_ode
// instead.
Trajectory solve_volterra(const spectral::SpectralFunction& f,
                          const SystemParams& p, double coupling,
                          const DriveSignal& drive, std::complex<double> a0,
                          const TimeGrid& grid,
                          const std::vector<std::complex<double>>& b0 = {});

// N(t) = |A(t)|² for a single-photon trajectory (A(0)=1, η=0, B(0)=0).
std::vector<double> single_photon_occupation(const Trajectory& traj);

struct Pulse {
    std::size_t index;      // sample index of the maximum
    double t;               // us
    double abs2;            // raw |A|² at the peak
    double normalized;      // abs2 / max_t |A|²
    bool above_barrier;     // normalized > exp(-κ t)
};

struct PulseMetrics {
    std::vector<Pulse> pulses;
    double abs2_max{0.0};
    double nominal_spacing{0.0};

    std::size_t count_above(double t_max) const;
    // max over pulses in [t - lookback, t] of normalized/exp(-κ t_p).
    double barrier_ratio_near(double t, double lookback, double kappa) const;
    // max raw peak |A|² over pulses with t_p > t_min.
    double late_envelope(double t_min) const;
};

// Interior local maxima of |A(t)|² separated by at least half the nominal
// revival spacing; the barrier test compares the peak-normalized |A|²
// against exp(-κ t).
PulseMetrics pulse_metrics(const Trajectory& traj, double kappa,
                           double nominal_spacing);

} // namespace revivals::dynamics
