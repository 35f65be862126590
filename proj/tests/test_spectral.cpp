// test_spectral.cpp — q-Gaussian line shape, comb construction, hole burning,
// discretization.

#include <doctest.h>

#include <cmath>
#include <random>

#include "revivals/quadrature.hpp"
#include "revivals/spectral.hpp"

using namespace revivals;
using spectral::QGaussian;

TEST_CASE("q-Gaussian FWHM definition") {
    QGaussian g(5.0, 2.0, 1.7);
    const double peak = g.density(5.0);
    CHECK(g.density(5.0 + 1.0) == doctest::Approx(0.5 * peak).epsilon(1e-12));
    CHECK(g.density(5.0 - 1.0) == doctest::Approx(0.5 * peak).epsilon(1e-12));
}

TEST_CASE("derived width for the paper line") {
    // q = 1.39, gamma_q/2pi = 9.4 MHz: Delta = gamma_q / (2 sqrt((2^q-2)/(2q-2)))
    QGaussian g(0.0, omega_from_mhz(9.4), 1.39);
    CHECK(mhz_from_omega(g.width()) == doctest::Approx(5.2678).epsilon(2e-4));

    // independent oracle: bisect the half-peak crossing of the sampled density
    const double half = 0.5 * g.density(0.0);
    double lo = 0.0, hi = 10.0 * g.width();
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g.density(mid) > half ? lo : hi) = mid;
    }
    CHECK(2.0 * lo == doctest::Approx(g.fwhm()).epsilon(1e-10));
}

TEST_CASE("q-Gaussian symmetry is exact") {
    // dyadic center and offsets so c+x and c-x are exactly representable
    QGaussian g(3.25, 1.1, 2.2);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(1, 1 << 14);
    for (int i = 0; i < 100; ++i) {
        const double x = double(u(rng)) / 1024.0;
        CHECK(g.density(3.25 + x) == g.density(3.25 - x));
    }
}

TEST_CASE("q-Gaussian parameter validation") {
    CHECK_THROWS_AS(QGaussian(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QGaussian(0.0, 1.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(QGaussian(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(QGaussian(0.0, -1.0, 1.4), std::invalid_argument);
    CHECK_THROWS_AS(QGaussian(0.0, 0.0, 1.4), std::invalid_argument);
}

TEST_CASE("q-Gaussian unit normalization and tail mass") {
    QGaussian g(0.0, omega_from_mhz(9.4), 1.39);
    const double w9 = g.halfwidth_for_tail(1e-9);
    auto r = quad::integrate([&](double x) { return g.density(x); }, -w9, w9,
                             1e-12);
    CHECK(std::fabs(r.value - 1.0) < 1e-8);

    // tail_mass consistency with direct quadrature
    const double x0 = 5.0 * g.width();
    auto inner = quad::integrate([&](double x) { return g.density(x); }, -x0,
                                 x0, 1e-12);
    CHECK(1.0 - 2.0 * g.tail_mass(x0) ==
          doctest::Approx(inner.value).epsilon(1e-10));
}

TEST_CASE("comb: Fig 1(a) structure") {
    spectral::CombConfig cfg; // paper card
    auto f = spectral::build_spectral_function(cfg);

    CHECK(f.total_weight() == doctest::Approx(6.1173).epsilon(1e-4));
    // seven local maxima at w_c ± n·spacing
    for (int n = -3; n <= 3; ++n) {
        const double c = cfg.cavity + n * cfg.spacing;
        const double eps = omega_from_mhz(1.0);
        CHECK(f(c) > f(c + eps));
        CHECK(f(c) > f(c - eps));
    }
    // outermost weight ratio exp(-(3*40)^2 / (2*150^2)) = 0.72615
    const double expect = std::exp(-(120.0 * 120.0) / (2.0 * 150.0 * 150.0));
    CHECK(expect == doctest::Approx(0.72615).epsilon(1e-4));
    CHECK(f(cfg.cavity + 3 * cfg.spacing) / f(cfg.cavity) ==
          doctest::Approx(expect).epsilon(2e-3));

    // normalization: integral over the window equals the weight sum
    auto r = quad::integrate([&](double w) { return f(w); }, f.window_lo(),
                             f.window_hi(), 1e-10);
    CHECK(std::fabs(r.value - f.total_weight()) < 1e-8 * f.total_weight());

    // symmetry about the comb center
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 0.98 * (f.window_hi() -
                                                          cfg.comb_center));
    const double fmax = f(cfg.cavity);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        CHECK(std::fabs(f(cfg.comb_center + x) - f(cfg.comb_center - x)) <
              1e-10 * fmax);
    }
}

TEST_CASE("comb: M=1 unit norm and parameter validation") {
    spectral::CombConfig cfg;
    cfg.ensembles = 1;
    auto f = spectral::build_spectral_function(cfg);
    auto r = quad::integrate([&](double w) { return f(w); }, f.window_lo(),
                             f.window_hi(), 1e-10);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));

    spectral::CombConfig even = cfg;
    even.ensembles = 4;
    CHECK_THROWS_AS(spectral::build_spectral_function(even),
                    std::invalid_argument);
}

TEST_CASE("holes: identity, depth-1 notch, tails") {
    spectral::CombConfig cfg;
    auto f = spectral::build_spectral_function(cfg);

    auto same = spectral::apply_holes(f, {{}, omega_from_mhz(0.5), 1.0});
    CHECK(same(cfg.cavity) == f(cfg.cavity));

    const double wh = cfg.cavity + omega_from_mhz(17.0);
    const double dh = omega_from_mhz(0.47);
    auto fh = spectral::apply_holes(f, {{wh}, dh, 1.0});
    CHECK(fh(wh) == 0.0);
    CHECK(fh(wh + 5.0 * dh) >= 0.999 * f(wh + 5.0 * dh));
    CHECK(fh(wh - 5.0 * dh) >= 0.999 * f(wh - 5.0 * dh));
}

TEST_CASE("holes: full-depth re-burn is an exact identity") {
    spectral::CombConfig cfg;
    auto f = spectral::build_spectral_function(cfg);
    spectral::HoleSpec spec{{cfg.cavity - omega_from_mhz(17.0),
                             cfg.cavity + omega_from_mhz(17.0)},
                            omega_from_mhz(0.47), 1.0};
    auto once = spectral::apply_holes(f, spec);
    auto twice = spectral::apply_holes(once, spec);
    for (int i = 0; i <= 2000; ++i) {
        const double w = f.window_lo() +
                         (f.window_hi() - f.window_lo()) * i / 2000.0;
        CHECK(twice(w) == once(w));
    }
}

TEST_CASE("holes: nonnegative under overlap, mass strictly decreases") {
    spectral::CombConfig cfg;
    auto f = spectral::build_spectral_function(cfg);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> c(-40.0, 40.0);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    auto fh = f;
    for (int j = 0; j < 6; ++j)
        fh = spectral::apply_holes(
            fh, {{cfg.cavity + omega_from_mhz(c(rng))},
                 omega_from_mhz(0.2 + 2.0 * d(rng)), d(rng)});
    double mass_h = 0.0, mass = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        const double w = f.window_lo() +
                         (f.window_hi() - f.window_lo()) * i / 5000.0;
        CHECK(fh(w) >= 0.0);
        mass_h += fh(w);
        mass += f(w);
    }
    CHECK(mass_h < mass);

    CHECK_THROWS_AS(
        spectral::apply_holes(f, {{cfg.cavity}, omega_from_mhz(0.5), 1.5}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        spectral::apply_holes(
            f, {{f.window_hi() + omega_from_mhz(10.0)}, omega_from_mhz(0.5), 1.0}),
        std::invalid_argument);
}

TEST_CASE("discretization: coupling norm identity") {
    spectral::CombConfig cfg;
    cfg.ensembles = 1;
    cfg.coupling = omega_from_mhz(8.0);
    auto f1 = spectral::build_spectral_function(cfg);
    for (int n : {2, 17, 400}) {
        auto ens = spectral::discretize_ensemble(f1, n);
        CHECK(ens.coupling_norm2 ==
              doctest::Approx(cfg.coupling * cfg.coupling).epsilon(1e-12));
    }

    spectral::CombConfig c7; // seven ensembles
    auto f7 = spectral::build_spectral_function(c7);
    auto ens = spectral::discretize_ensemble(f7, 1200);
    CHECK(ens.coupling_norm2 ==
          doctest::Approx(c7.coupling * c7.coupling * f7.total_weight())
              .epsilon(1e-12));
    for (std::size_t l = 1; l < ens.frequency.size(); ++l)
        CHECK(ens.frequency[l] > ens.frequency[l - 1]);
    for (double g : ens.coupling)
        CHECK(g >= 0.0);

    CHECK_THROWS_AS(spectral::discretize_ensemble(f7, 1),
                    std::invalid_argument);
}

TEST_CASE("discretization: burning holes lowers the coupling norm") {
    spectral::CombConfig cfg;
    auto f = spectral::build_spectral_function(cfg);
    spectral::HoleSpec spec{{cfg.cavity - omega_from_mhz(17.0),
                             cfg.cavity + omega_from_mhz(17.0)},
                            omega_from_mhz(1.0), 1.0};
    auto fh = spectral::apply_holes(f, spec);
    auto e0 = spectral::discretize_ensemble(f, 1200);
    auto eh = spectral::discretize_ensemble(fh, 1200);
    CHECK(eh.coupling_norm2 < e0.coupling_norm2);
}
