// modes.cpp — generator assembly, ZGEEV solve, peak extraction, detuning
// sweep.

#include "revivals/modes.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "revivals/dynamics.hpp"
#include "revivals/errors.hpp"

namespace revivals::modes {

using cplx = std::complex<double>;

GeneratorMatrix build_generator_matrix(const spectral::DiscreteEnsemble& ens,
                                       const dynamics::SystemParams& p) {
    const int n = int(ens.frequency.size());
    if (n < 1)
        throw std::invalid_argument("generator matrix requires N >= 1 spins");
    GeneratorMatrix m;
    m.dim = n + 1;
    m.kappa = p.kappa;
    m.gamma = p.gamma;
    m.cavity = p.cavity;
    m.a.assign(std::size_t(m.dim) * m.dim, cplx(0.0, 0.0));
    m.at(0, 0) = cplx(p.kappa, 0.0);
    for (int k = 1; k <= n; ++k) {
        m.at(k, k) = cplx(p.gamma, ens.frequency[k - 1] - p.cavity);
        m.at(0, k) = cplx(-ens.coupling[k - 1], 0.0);
        m.at(k, 0) = cplx(+ens.coupling[k - 1], 0.0);
    }
    return m;
}

namespace {

double frobenius_norm(const GeneratorMatrix& m) {
    double s = 0.0;
    for (const cplx& z : m.a)
        s += std::norm(z);
    return std::sqrt(s);
}

// ||L psi - lambda psi|| for one pair, O(dim) using the arrowhead structure.
double residual_norm(const GeneratorMatrix& m, const cplx* psi, cplx lambda) {
    const int n = m.dim;
    cplx r0 = (m.at(0, 0) - lambda) * psi[0];
    for (int k = 1; k < n; ++k)
        r0 += m.at(0, k) * psi[k];
    double s = std::norm(r0);
    for (int k = 1; k < n; ++k) {
        const cplx rk = m.at(k, 0) * psi[0] + (m.at(k, k) - lambda) * psi[k];
        s += std::norm(rk);
    }
    return std::sqrt(s);
}

} // namespace

ModeSet solve_modes(const GeneratorMatrix& m, bool keep_vectors) {
    const int n = m.dim;
    std::vector<cplx> work = m.a; // zgeev destroys its input
    ModeSet ms;
    ms.dim = n;
    ms.kappa = m.kappa;
    ms.gamma = m.gamma;
    ms.cavity = m.cavity;
    ms.lambda.resize(n);
    ms.vectors.assign(std::size_t(n) * n, cplx(0.0, 0.0));
    const int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'V', n,
        reinterpret_cast<lapack_complex_double*>(work.data()), n,
        reinterpret_cast<lapack_complex_double*>(ms.lambda.data()), nullptr, 1,
        reinterpret_cast<lapack_complex_double*>(ms.vectors.data()), n);
    if (info != 0)
        throw numeric_error("zgeev failed to converge (info=" +
                            std::to_string(info) + ")");

    ms.cavity_content.resize(n);
    for (int l = 0; l < n; ++l)
        ms.cavity_content[l] = std::norm(ms.vectors[std::size_t(l) * n]);

    // Spot-check residuals on a sample of pairs; the full bound is covered
    // by the test suite.
    const double norm = frobenius_norm(m);
    const int stride = std::max(1, n / 16);
    for (int l = 0; l < n; l += stride) {
        const double r = residual_norm(m, ms.vector(l), ms.lambda[l]);
        if (!(r < 1.0e-8 * norm))
            throw numeric_error("eigenpair residual " + std::to_string(r) +
                                " exceeds 1e-8*||L|| at index " +
                                std::to_string(l));
    }
    if (!keep_vectors) {
        ms.vectors.clear();
        ms.vectors.shrink_to_fit();
    }
    ms.has_vectors = keep_vectors;
    return ms;
}

namespace {

constexpr double peak_bin_width = omega_from_mhz(0.2);
constexpr double peak_median_factor = 10.0;
constexpr double peak_line_halfwidth = omega_from_mhz(2.0);
constexpr double peak_dominance_fraction = 0.08;

} // namespace

std::vector<Peak> dominant_peaks(const ModeSet& ms) {
    const int n = ms.dim;
    if (n == 0)
        return {};
    double im_lo = ms.lambda[0].imag(), im_hi = im_lo;
    for (const cplx& l : ms.lambda) {
        im_lo = std::min(im_lo, l.imag());
        im_hi = std::max(im_hi, l.imag());
    }
    // The content scatter interleaves mode families, so the peak search runs
    // on the binned upper envelope. Bins hold a few modes each: at least the
    // nominal 2π·0.2 MHz, widened when the mode spacing is coarser.
    const double bin =
        std::max(peak_bin_width, 3.0 * (im_hi - im_lo) / double(n));
    const int nbins = std::max(1, int(std::ceil((im_hi - im_lo) / bin)));
    std::vector<double> value(nbins, 0.0);
    std::vector<int> argmax(nbins, -1);
    for (int l = 0; l < n; ++l) {
        int b = int((ms.lambda[l].imag() - im_lo) / bin);
        b = std::clamp(b, 0, nbins - 1);
        if (ms.cavity_content[l] > value[b]) {
            value[b] = ms.cavity_content[l];
            argmax[b] = l;
        }
    }
    std::vector<int> occ; // occupied bins, ordered
    for (int b = 0; b < nbins; ++b)
        if (argmax[b] >= 0)
            occ.push_back(b);

    std::vector<double> sorted = ms.cavity_content;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double median = sorted[n / 2];

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < occ.size(); ++i) {
        const double v = value[occ[i]];
        if (v < peak_median_factor * median)
            continue;
        if (v < value[occ[i - 1]] || v <= value[occ[i + 1]])
            continue;
        const int l = argmax[occ[i]];
        peaks.push_back(
            {ms.cavity + ms.lambda[l].imag(), ms.cavity_content[l], l});
    }

    // Merge maxima within the smoothing radius; a polariton line can put
    // several bins above the noise floor.
    std::vector<Peak> merged;
    for (const Peak& pk : peaks) {
        if (!merged.empty() &&
            pk.frequency - merged.back().frequency < 2.0 * bin) {
            if (pk.content > merged.back().content)
                merged.back() = pk;
        } else {
            merged.push_back(pk);
        }
    }

    if (merged.empty())
        return merged;

    // Dominance by line weight (sum of cavity content near the maximum): the
    // weight of a polariton line is stable under discretization refinement,
    // unlike per-mode content.
    std::vector<double> weight(merged.size(), 0.0);
    for (std::size_t i = 0; i < merged.size(); ++i) {
        for (int l = 0; l < n; ++l)
            if (std::fabs(ms.cavity + ms.lambda[l].imag() -
                          merged[i].frequency) <= peak_line_halfwidth)
                weight[i] += ms.cavity_content[l];
    }
    const double wmax = *std::max_element(weight.begin(), weight.end());
    std::vector<Peak> dominant;
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (weight[i] >= peak_dominance_fraction * wmax)
            dominant.push_back(merged[i]);
    return dominant;
}

std::vector<Peak> find_polariton_peaks(const ModeSet& ms, int k) {
    if (k < 1)
        throw std::invalid_argument("peak count must be positive");
    std::vector<Peak> peaks = dominant_peaks(ms);
    if (int(peaks.size()) < k)
        throw numeric_error(
            "only " + std::to_string(peaks.size()) + " dominant polariton peaks "
            "found, " + std::to_string(k) + " requested (coupling too weak for "
            "multimode operation)");
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.content > b.content; });
    peaks.resize(k);
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.frequency < b.frequency; });
    return peaks;
}

DetuningMap sweep_detuning(const spectral::CombConfig& cfg,
                           const dynamics::SystemParams& p,
                           const std::vector<double>& comb_centers,
                           int n_spins, int threads) {
    DetuningMap map;
    map.points.resize(comb_centers.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= comb_centers.size())
                return;
            spectral::CombConfig c = cfg;
            c.comb_center = comb_centers[i];
            const auto f = spectral::build_spectral_function(c);
            const auto ens = spectral::discretize_ensemble(f, n_spins);
            const auto ms = solve_modes(build_generator_matrix(ens, p), false);
            SweepPoint& pt = map.points[i];
            pt.comb_center = comb_centers[i];
            pt.im_lambda.reserve(ms.dim);
            pt.re_lambda.reserve(ms.dim);
            for (const cplx& l : ms.lambda) {
                pt.im_lambda.push_back(l.imag());
                pt.re_lambda.push_back(l.real());
            }
            pt.cavity_content = ms.cavity_content;
        }
    };
    const int nw = std::max(1, threads);
    if (nw == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    return map;
}

} // namespace revivals::modes
