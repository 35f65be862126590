// test_quadrature.cpp — adaptive G7K15 and Gauss-Legendre nodes.

#include <doctest.h>

#include <cmath>

#include "revivals/quadrature.hpp"

using namespace revivals;

TEST_CASE("polynomial and exponential integrals") {
    auto r1 = quad::integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
    CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    auto r2 = quad::integrate([](double x) { return std::exp(x); }, -1.0, 2.0,
                              1e-12);
    CHECK(r2.value ==
          doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand") {
    auto r = quad::integrate([](double x) { return std::sin(50.0 * x); }, 0.0,
                             1.0, 1e-11);
    CHECK(r.value ==
          doctest::Approx((1.0 - std::cos(50.0)) / 50.0).epsilon(1e-9));
    CHECK(r.converged);
}

TEST_CASE("narrow peak") {
    // Lorentzian of width 1e-3 inside a unit interval
    auto r = quad::integrate(
        [](double x) {
            const double w = 1e-3;
            return w / (M_PI * ((x - 0.3) * (x - 0.3) + w * w));
        },
        0.0, 1.0, 1e-10);
    const double exact =
        (std::atan(0.7 / 1e-3) + std::atan(0.3 / 1e-3)) / M_PI;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("gauss-legendre nodes") {
    auto gl = quad::gauss_legendre(16);
    double wsum = 0.0, x14 = 0.0;
    for (int i = 0; i < 16; ++i) {
        wsum += gl.weight[i];
        x14 += gl.weight[i] * std::pow(gl.node[i], 14);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree <= 31: int_{-1}^{1} x^14 = 2/15
    CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
    // symmetry
    for (int i = 0; i < 8; ++i) {
        CHECK(gl.node[i] == doctest::Approx(-gl.node[15 - i]).epsilon(1e-15));
        CHECK(gl.weight[i] == doctest::Approx(gl.weight[15 - i]).epsilon(1e-15));
    }
}
