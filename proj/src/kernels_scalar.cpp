// kernels_scalar.cpp — portable reference implementations. These define the
// semantics the SIMD variants are tested against.

#include "revivals/kernels.hpp"

namespace revivals::kern {
namespace {

Cplx scalar_cdot(const double* ar, const double* ai, const double* br,
                 const double* bi, std::size_t n) {
    double sr = 0.0, si = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sr += ar[j] * br[j] - ai[j] * bi[j];
        si += ar[j] * bi[j] + ai[j] * br[j];
    }
    return {sr, si};
}

Cplx scalar_spin_stage(std::size_t n, double gamma, const double* delta,
                       const double* g, double a_re, double a_im,
                       const double* br, const double* bi, double* dbr,
                       double* dbi) {
    double sr = 0.0, si = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        dbr[l] = -gamma * br[l] + delta[l] * bi[l] - g[l] * a_re;
        dbi[l] = -gamma * bi[l] - delta[l] * br[l] - g[l] * a_im;
        sr += g[l] * br[l];
        si += g[l] * bi[l];
    }
    return {sr, si};
}

Cplx scalar_phasor_step(std::size_t n, const double* cr, const double* ci,
                        double* pr, double* pi, const double* sr,
                        const double* si) {
    double accr = 0.0, acci = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double npr = pr[j] * sr[j] - pi[j] * si[j];
        const double npi = pr[j] * si[j] + pi[j] * sr[j];
        pr[j] = npr;
        pi[j] = npi;
        const double qr = npr - 1.0;
        accr += cr[j] * qr - ci[j] * npi;
        acci += cr[j] * npi + ci[j] * qr;
    }
    return {accr, acci};
}

double scalar_pv_accumulate(std::size_t n, const double* w, const double* f,
                            double f0, const double* x, double x0) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        s += w[j] * (f[j] - f0) / (x0 - x[j]);
    return s;
}

void scalar_axpy(std::size_t n, double c, const double* b, const double* a,
                 double* y) {
    for (std::size_t j = 0; j < n; ++j)
        y[j] = a[j] + c * b[j];
}

double scalar_norm2(std::size_t n, const double* xr, const double* xi) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        s += xr[j] * xr[j] + xi[j] * xi[j];
    return s;
}

} // namespace

const Ops scalar_ops = {scalar_cdot,         scalar_spin_stage,
                        scalar_phasor_step,  scalar_pv_accumulate,
                        scalar_axpy,         scalar_norm2};

} // namespace revivals::kern
