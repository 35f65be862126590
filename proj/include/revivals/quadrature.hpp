// quadrature.hpp — adaptive Gauss-Kronrod (7,15) integration and
// Gauss-Legendre node generation.

#pragma once

#include <functional>
#include <vector>

namespace revivals::quad {

struct Result {
    double value{0.0};
    double error{0.0};     // accumulated error estimate
    bool converged{true};
    long evaluations{0};
};

// Integrate f over [a, b], bisecting panels until the local G7/K15
// discrepancy meets the tolerance. abs_tol and rel_tol combine as
//   err_panel <= max(abs_tol, rel_tol * |I|) * (panel share)
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1.0e-10, double abs_tol = 0.0,
                 int max_depth = 48);

// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;
};
GaussLegendre gauss_legendre(int n);

} // namespace revivals::quad
