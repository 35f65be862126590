// modes.hpp — non-Hermitian eigenvalue analysis of the coupled cavity-spin
// system. The generator is the (N+1)x(N+1) complex arrowhead
//   L[0][0] = kappa,  L[k][k] = gamma + i(w_k - w_c),
//   L[0][k] = -g_k,   L[k][0] = +g_k,
// whose eigenpairs L psi = lambda psi decay as exp(-lambda t); Im(lambda) is
// the collective eigenfrequency relative to the cavity and Re(lambda) the
// decay rate, bounded by gamma <= Re(lambda) <= kappa.

#pragma once

#include <complex>
#include <vector>

#include "revivals/spectral.hpp"

namespace revivals::dynamics {
struct SystemParams;
}

namespace revivals::modes {

struct GeneratorMatrix {
    int dim{0};                            // N+1
    std::vector<std::complex<double>> a;   // column-major
    double kappa{0.0};
    double gamma{0.0};
    double cavity{0.0};

    std::complex<double>& at(int r, int c) { return a[std::size_t(c) * dim + r]; }
    const std::complex<double>& at(int r, int c) const {
        return a[std::size_t(c) * dim + r];
    }
};

GeneratorMatrix build_generator_matrix(const spectral::DiscreteEnsemble& ens,
                                       const dynamics::SystemParams& p);

struct ModeSet {
    std::vector<std::complex<double>> lambda;
    std::vector<double> cavity_content;            // |A_l|^2 of unit-norm psi_l
    std::vector<std::complex<double>> vectors;     // column-major, optional
    int dim{0};
    double kappa{0.0};
    double gamma{0.0};
    double cavity{0.0};
    bool has_vectors{false};

    const std::complex<double>* vector(int l) const {
        return vectors.data() + std::size_t(l) * dim;
    }
};

// Dense general complex eigensolve (LAPACK ZGEEV). Eigenvectors are
// unit-norm. A sampled residual check guards against solver failures; the
// full per-pair residual bound is exercised in the test suite.
ModeSet solve_modes(const GeneratorMatrix& m, bool keep_vectors = true);

struct Peak {
    double frequency;  // absolute ω = ω_c + Im(λ)
    double content;    // |A_l|²
    int mode_index;
};

// Dominant-peak rule (documented): bin |A_l|² against Im(λ_l) (bin width
// 2π·0.2 MHz, widened to hold a few modes when the discretization is
// coarser), take local maxima of the binned upper envelope above 10× the
// median mode content, merge within two bins, and keep peaks whose line
// weight (content summed within ±2π·2 MHz) reaches 8% of the strongest
// line. The weight criterion separates polaritons from the weak dispersive
// bumps near detuned comb teeth and is stable under grid refinement, unlike
// per-mode content.
std::vector<Peak> dominant_peaks(const ModeSet& ms);

// The k strongest dominant peaks, sorted by frequency. Throws if fewer than
// k qualify (coupling too weak for multimode operation).
std::vector<Peak> find_polariton_peaks(const ModeSet& ms, int k);

struct SweepPoint {
    double comb_center; // ω_s
    std::vector<double> im_lambda;
    std::vector<double> re_lambda;
    std::vector<double> cavity_content;
};

struct DetuningMap {
    std::vector<SweepPoint> points;
};

// Translate the comb (shape fixed), rediscretize with n_spins over the
// tracking window, and solve at each ω_s. Points are independent and run on
// `threads` workers.
DetuningMap sweep_detuning(const spectral::CombConfig& cfg,
                           const dynamics::SystemParams& p,
                           const std::vector<double>& comb_centers,
                           int n_spins, int threads = 1);

} // namespace revivals::modes
