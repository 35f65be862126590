// test_modes.cpp — generator structure, eigensolve contracts, peak
// extraction, detuning sweep, consistency with the time-domain route.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "revivals/dynamics.hpp"
#include "revivals/errors.hpp"
#include "revivals/modes.hpp"
#include "revivals/spectral.hpp"

using namespace revivals;
using cplx = std::complex<double>;

namespace {

spectral::DiscreteEnsemble single_spin(double freq, double g) {
    spectral::DiscreteEnsemble e;
    e.frequency = {freq};
    e.coupling = {g};
    e.coupling_norm2 = g * g;
    return e;
}

spectral::SpectralFunction reference_comb(double coupling_mhz) {
    spectral::CombConfig cfg;
    cfg.coupling = omega_from_mhz(coupling_mhz);
    return spectral::build_spectral_function(cfg);
}

} // namespace

TEST_CASE("uncoupled 2x2 generator is diagonal") {
    dynamics::SystemParams p;
    auto m = modes::build_generator_matrix(single_spin(p.cavity + 7.0, 0.0), p);
    auto ms = modes::solve_modes(m);
    std::vector<cplx> l = ms.lambda;
    std::sort(l.begin(), l.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(l[0] - cplx(p.gamma, 7.0)) < 1e-12);
    CHECK(std::abs(l[1] - cplx(p.kappa, 0.0)) < 1e-12);
}

TEST_CASE("resonant pair splits as kappa ± i g") {
    dynamics::SystemParams p;
    p.gamma = p.kappa; // closed-form case
    const double g = 42.0;
    auto ms = modes::solve_modes(
        modes::build_generator_matrix(single_spin(p.cavity, g), p));
    std::vector<cplx> l = ms.lambda;
    std::sort(l.begin(), l.end(),
              [](cplx a, cplx b) { return a.imag() < b.imag(); });
    CHECK(std::abs(l[0] - cplx(p.kappa, -g)) < 1e-12 * g);
    CHECK(std::abs(l[1] - cplx(p.kappa, +g)) < 1e-12 * g);
}

TEST_CASE("trace identity and Rayleigh identity") {
    auto f = reference_comb(26.0);
    auto ens = spectral::discretize_ensemble(f, 400);
    dynamics::SystemParams p;
    auto m = modes::build_generator_matrix(ens, p);
    auto ms = modes::solve_modes(m);

    cplx trace(0.0, 0.0), sum(0.0, 0.0);
    double scale = 0.0;
    for (int k = 0; k < ms.dim; ++k) {
        trace += m.at(k, k);
        sum += ms.lambda[k];
        scale += std::abs(ms.lambda[k]);
    }
    CHECK(std::abs(sum - trace) < 1e-8 * scale);

    double worst = 0.0;
    for (int l = 0; l < ms.dim; ++l) {
        const double c = ms.cavity_content[l];
        worst = std::max(worst, std::fabs(ms.lambda[l].real() -
                                          (p.kappa * c + p.gamma * (1.0 - c))));
    }
    CHECK(worst < 1e-9);

    // spectrum bound from the diagonal Hermitian part
    for (const cplx& l : ms.lambda) {
        CHECK(l.real() >= p.gamma - 1e-9 * p.kappa);
        CHECK(l.real() <= p.kappa + 1e-9 * p.kappa);
    }
}

TEST_CASE("full residual bound for every eigenpair") {
    auto f = reference_comb(26.0);
    auto ens = spectral::discretize_ensemble(f, 400);
    dynamics::SystemParams p;
    auto m = modes::build_generator_matrix(ens, p);
    auto ms = modes::solve_modes(m);
    double norm2 = 0.0;
    for (const cplx& z : m.a)
        norm2 += std::norm(z);
    const double norm = std::sqrt(norm2);
    for (int l = 0; l < ms.dim; ++l) {
        const cplx* psi = ms.vector(l);
        // arrowhead structure: O(n) residual
        cplx r0 = (m.at(0, 0) - ms.lambda[l]) * psi[0];
        double rnorm2 = 0.0, vnorm2 = std::norm(psi[0]);
        for (int k = 1; k < ms.dim; ++k) {
            r0 += m.at(0, k) * psi[k];
            const cplx rk =
                m.at(k, 0) * psi[0] + (m.at(k, k) - ms.lambda[l]) * psi[k];
            rnorm2 += std::norm(rk);
            vnorm2 += std::norm(psi[k]);
        }
        rnorm2 += std::norm(r0);
        CHECK(std::sqrt(rnorm2) < 1e-8 * norm);
        CHECK(vnorm2 == doctest::Approx(1.0).epsilon(1e-10)); // unit norm
    }
}

TEST_CASE("one RK4 step equals the truncated matrix-exponential series") {
    // integrate_ode's generator is -(L) in the rotating frame: a single RK4
    // step from a random state must match sum_k (-hL)^k/k! through k=4.
    auto f = reference_comb(26.0);
    auto ens = spectral::discretize_ensemble(f, 40);
    dynamics::SystemParams p;
    auto m = modes::build_generator_matrix(ens, p);
    const int n = m.dim;

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> y0(n);
    for (auto& z : y0)
        z = cplx(u(rng), u(rng));

    const double h = 1e-5;
    std::vector<cplx> acc = y0, term = y0;
    for (int k = 1; k <= 4; ++k) {
        std::vector<cplx> next(n, cplx(0, 0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                next[r] += m.at(r, c) * term[c];
        for (int r = 0; r < n; ++r) {
            term[r] = next[r] * (-h / double(k));
            acc[r] += term[r];
        }
    }

    std::vector<cplx> b0(y0.begin() + 1, y0.end());
    auto traj = dynamics::integrate_ode(ens, p, {}, y0[0], b0,
                                        {h, 1},
                                        {false, true});
    CHECK(std::abs(traj.a[1] - acc[0]) < 1e-12);
    for (int k = 1; k < n; ++k)
        CHECK(std::abs(traj.spins_final[k - 1] - acc[k]) < 1e-12);
}

TEST_CASE("translation covariance of the spectrum") {
    spectral::CombConfig cfg;
    cfg.coupling = omega_from_mhz(8.0);
    dynamics::SystemParams p;
    auto solve_at = [&](double shift) {
        spectral::CombConfig c = cfg;
        c.comb_center += shift;
        c.cavity += shift;
        dynamics::SystemParams q = p;
        q.cavity += shift;
        auto f = spectral::build_spectral_function(c);
        auto ms = modes::solve_modes(
            modes::build_generator_matrix(spectral::discretize_ensemble(f, 200), q),
            false);
        std::vector<cplx> l = ms.lambda;
        std::sort(l.begin(), l.end(), [](cplx a, cplx b) {
            return a.imag() != b.imag() ? a.imag() < b.imag()
                                        : a.real() < b.real();
        });
        return l;
    };
    auto l0 = solve_at(0.0);
    auto l1 = solve_at(omega_from_mhz(250.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < l0.size(); ++i)
        worst = std::max(worst, std::abs(l0[i] - l1[i]));
    CHECK(worst < 1e-9 * omega_from_mhz(300.0));
}

TEST_CASE("dominant peak counts and symmetry") {
    dynamics::SystemParams p;
    auto solve = [&](double om_mhz, int n) {
        auto f = reference_comb(om_mhz);
        auto ens = spectral::discretize_ensemble(f, n);
        return modes::solve_modes(modes::build_generator_matrix(ens, p), false);
    };

    auto ms8 = solve(8.0, 600);
    auto pk8 = modes::dominant_peaks(ms8);
    REQUIRE(pk8.size() == 2);
    // straddle the cavity symmetrically within 2pi·1 MHz
    CHECK(std::fabs(pk8[0].frequency + pk8[1].frequency - 2.0 * p.cavity) <
          omega_from_mhz(1.0));
    // splitting near 2*Omega
    CHECK(mhz_from_omega(pk8[1].frequency - pk8[0].frequency) ==
          doctest::Approx(16.0).epsilon(0.10));

    auto ms26 = solve(26.0, 600);
    auto pk26 = modes::dominant_peaks(ms26);
    REQUIRE(pk26.size() == 8);
    // near-equidistant comb of polaritons
    std::vector<double> gaps;
    for (std::size_t i = 1; i < pk26.size(); ++i)
        gaps.push_back(pk26[i].frequency - pk26[i - 1].frequency);
    const double mean =
        std::accumulate(gaps.begin(), gaps.end(), 0.0) / gaps.size();
    for (double g : gaps)
        CHECK(std::fabs(g - mean) < 0.25 * mean);

    CHECK(modes::find_polariton_peaks(ms26, 8).size() == 8);
    CHECK_THROWS_AS(modes::find_polariton_peaks(ms26, 20), numeric_error);
    CHECK_THROWS_AS(modes::find_polariton_peaks(ms26, 0), std::invalid_argument);
}

TEST_CASE("doubling N leaves the polariton line centroids in place") {
    dynamics::SystemParams p;
    auto f = reference_comb(26.0);
    auto centroids = [&](int n, const std::vector<double>& ref) {
        auto ens = spectral::discretize_ensemble(f, n);
        auto ms = modes::solve_modes(modes::build_generator_matrix(ens, p),
                                     false);
        std::vector<double> out;
        for (double r : ref) {
            double sw = 0.0, s = 0.0;
            for (int l = 0; l < ms.dim; ++l) {
                const double w = p.cavity + ms.lambda[l].imag();
                if (std::fabs(w - r) < omega_from_mhz(3.0)) {
                    sw += ms.cavity_content[l] * w;
                    s += ms.cavity_content[l];
                }
            }
            out.push_back(sw / s);
        }
        return out;
    };
    auto ens = spectral::discretize_ensemble(f, 1200);
    auto ms = modes::solve_modes(modes::build_generator_matrix(ens, p), false);
    auto pks = modes::find_polariton_peaks(ms, 8);
    std::vector<double> ref;
    for (const auto& pk : pks)
        ref.push_back(pk.frequency);
    auto c1 = centroids(1200, ref);
    auto c2 = centroids(2400, ref);
    for (std::size_t i = 0; i < c1.size(); ++i)
        CHECK(std::fabs(c1[i] - c2[i]) < omega_from_mhz(0.05));
}

TEST_CASE("detuning sweep: protection limit reached from above") {
    spectral::CombConfig cfg;
    cfg.coupling = omega_from_mhz(26.0);
    dynamics::SystemParams p;
    std::vector<double> centers;
    for (int i = 0; i <= 20; ++i)
        centers.push_back(p.cavity + omega_from_mhz(-150.0 + 7.5 * i));
    auto map = modes::sweep_detuning(cfg, p, centers, 400, 2);
    REQUIRE(map.points.size() == centers.size());

    // among cavity-dominated modes the decay bottoms out at (kappa+gamma)/2
    double min_re = 1e300;
    for (const auto& pt : map.points)
        for (std::size_t l = 0; l < pt.re_lambda.size(); ++l)
            if (pt.cavity_content[l] >= 0.5)
                min_re = std::min(min_re, pt.re_lambda[l]);
    const double limit = 0.5 * (p.kappa + p.gamma);
    CHECK(min_re >= limit * (1.0 - 1e-9));
    CHECK(min_re <= limit * 1.15);

    // avoided crossing at the central resonance: at ws = wc the two dominant
    // peaks straddle the cavity
    // (covered by the Omega = 8 MHz dominant-peak test above)
}

TEST_CASE("mode frequencies appear in the time-domain spectrum") {
    dynamics::SystemParams p;
    auto f = reference_comb(26.0);
    auto ens = spectral::discretize_ensemble(f, 1200);
    auto ms = modes::solve_modes(modes::build_generator_matrix(ens, p), false);
    auto pks = modes::find_polariton_peaks(ms, 8);

    auto traj = dynamics::solve_volterra(f, p, omega_from_mhz(26.0), {},
                                         {1.0, 0.0},
                                         dynamics::make_grid(2.0, 5e-5));
    // Each polariton line is a cluster of modes; the periodogram maximum
    // must sit within the line itself: compare against the content-weighted
    // centroid with a tolerance tied to the line's own spread.
    for (const auto& pk : pks) {
        double sw = 0.0, s = 0.0, sww = 0.0;
        for (int l = 0; l < ms.dim; ++l) {
            const double w = p.cavity + ms.lambda[l].imag();
            if (std::fabs(w - pk.frequency) < omega_from_mhz(3.0)) {
                sw += ms.cavity_content[l] * w;
                sww += ms.cavity_content[l] * w * w;
                s += ms.cavity_content[l];
            }
        }
        const double centroid = sw / s - p.cavity;
        const double spread = std::sqrt(std::max(0.0, sww / s - (sw / s) * (sw / s)));
        double best_nu = centroid, best_pow = -1.0;
        for (double d = -omega_from_mhz(3.0); d <= omega_from_mhz(3.0);
             d += omega_from_mhz(0.02)) {
            const double nu = centroid + d;
            cplx acc(0.0, 0.0);
            for (std::size_t i = 0; i < traj.a.size(); i += 4)
                acc += traj.a[i] * std::exp(cplx(0.0, nu * traj.grid.time(i)));
            if (std::norm(acc) > best_pow) {
                best_pow = std::norm(acc);
                best_nu = nu;
            }
        }
        CHECK(std::fabs(best_nu - centroid) <
              std::max(omega_from_mhz(0.5), 2.0 * spread));
    }
}

TEST_CASE("avoided crossings where a tooth meets the cavity") {
    // At ws - wc in {0, 40, 80} MHz one ensemble is resonant: the cavity
    // hybridizes 50/50 with the local bright mode. Between crossings a
    // single cavity-like mode dominates.
    dynamics::SystemParams p;
    spectral::CombConfig base;
    base.coupling = omega_from_mhz(8.0);
    auto top_two = [&](double off_mhz) {
        spectral::CombConfig c = base;
        c.comb_center = p.cavity + omega_from_mhz(off_mhz);
        auto f = spectral::build_spectral_function(c);
        auto ens = spectral::discretize_ensemble(f, 400);
        auto ms = modes::solve_modes(modes::build_generator_matrix(ens, p),
                                     false);
        double c1 = 0.0, c2 = 0.0;
        for (double v : ms.cavity_content) {
            if (v > c1) {
                c2 = c1;
                c1 = v;
            } else {
                c2 = std::max(c2, v);
            }
        }
        return std::pair<double, double>(c1, c2);
    };
    for (double off : {0.0, 40.0, 80.0}) {
        auto [c1, c2] = top_two(off);
        CHECK(c1 < 0.3);        // no single dominant cavity mode
        CHECK(c2 / c1 > 0.6);   // split between two hybridized partners
    }
    for (double off : {20.0, 60.0}) {
        auto [c1, c2] = top_two(off);
        CHECK(c1 > 0.5);
        CHECK(c2 / c1 < 0.3);
    }
}
