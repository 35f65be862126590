// kernels_neon.cpp — NEON variants (aarch64, 2 doubles per lane). NEON is
// baseline on aarch64, so no cpuid gate is needed beyond the architecture.

#include "revivals/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace revivals::kern {
namespace {

inline double hsum(float64x2_t v) { return vaddvq_f64(v); }

Cplx neon_cdot(const double* ar, const double* ai, const double* br,
               const double* bi, std::size_t n) {
    float64x2_t sr0 = vdupq_n_f64(0.0), si0 = vdupq_n_f64(0.0);
    float64x2_t sr1 = vdupq_n_f64(0.0), si1 = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        float64x2_t xr = vld1q_f64(ar + j), xi = vld1q_f64(ai + j);
        float64x2_t yr = vld1q_f64(br + j), yi = vld1q_f64(bi + j);
        sr0 = vfmaq_f64(sr0, xr, yr);
        sr0 = vfmsq_f64(sr0, xi, yi);
        si0 = vfmaq_f64(si0, xr, yi);
        si0 = vfmaq_f64(si0, xi, yr);
        xr = vld1q_f64(ar + j + 2);
        xi = vld1q_f64(ai + j + 2);
        yr = vld1q_f64(br + j + 2);
        yi = vld1q_f64(bi + j + 2);
        sr1 = vfmaq_f64(sr1, xr, yr);
        sr1 = vfmsq_f64(sr1, xi, yi);
        si1 = vfmaq_f64(si1, xr, yi);
        si1 = vfmaq_f64(si1, xi, yr);
    }
    double sr = hsum(vaddq_f64(sr0, sr1));
    double si = hsum(vaddq_f64(si0, si1));
    for (; j < n; ++j) {
        sr += ar[j] * br[j] - ai[j] * bi[j];
        si += ar[j] * bi[j] + ai[j] * br[j];
    }
    return {sr, si};
}

Cplx neon_spin_stage(std::size_t n, double gamma, const double* delta,
                     const double* g, double a_re, double a_im,
                     const double* br, const double* bi, double* dbr,
                     double* dbi) {
    const float64x2_t vg = vdupq_n_f64(gamma);
    const float64x2_t var = vdupq_n_f64(a_re);
    const float64x2_t vai = vdupq_n_f64(a_im);
    float64x2_t sr = vdupq_n_f64(0.0), si = vdupq_n_f64(0.0);
    std::size_t l = 0;
    for (; l + 2 <= n; l += 2) {
        float64x2_t vbr = vld1q_f64(br + l);
        float64x2_t vbi = vld1q_f64(bi + l);
        float64x2_t vd = vld1q_f64(delta + l);
        float64x2_t vgl = vld1q_f64(g + l);
        float64x2_t r = vnegq_f64(vmulq_f64(vg, vbr));
        r = vfmaq_f64(r, vd, vbi);
        r = vfmsq_f64(r, vgl, var);
        vst1q_f64(dbr + l, r);
        float64x2_t s = vnegq_f64(vmulq_f64(vg, vbi));
        s = vfmsq_f64(s, vd, vbr);
        s = vfmsq_f64(s, vgl, vai);
        vst1q_f64(dbi + l, s);
        sr = vfmaq_f64(sr, vgl, vbr);
        si = vfmaq_f64(si, vgl, vbi);
    }
    double accr = hsum(sr), acci = hsum(si);
    for (; l < n; ++l) {
        dbr[l] = -gamma * br[l] + delta[l] * bi[l] - g[l] * a_re;
        dbi[l] = -gamma * bi[l] - delta[l] * br[l] - g[l] * a_im;
        accr += g[l] * br[l];
        acci += g[l] * bi[l];
    }
    return {accr, acci};
}

Cplx neon_phasor_step(std::size_t n, const double* cr, const double* ci,
                      double* pr, double* pi, const double* sr,
                      const double* si) {
    const float64x2_t one = vdupq_n_f64(1.0);
    float64x2_t ar = vdupq_n_f64(0.0), ai = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        float64x2_t vpr = vld1q_f64(pr + j);
        float64x2_t vpi = vld1q_f64(pi + j);
        float64x2_t vsr = vld1q_f64(sr + j);
        float64x2_t vsi = vld1q_f64(si + j);
        float64x2_t npr = vfmaq_f64(vnegq_f64(vmulq_f64(vpi, vsi)), vpr, vsr);
        float64x2_t npi = vfmaq_f64(vmulq_f64(vpi, vsr), vpr, vsi);
        vst1q_f64(pr + j, npr);
        vst1q_f64(pi + j, npi);
        float64x2_t qr = vsubq_f64(npr, one);
        float64x2_t vcr = vld1q_f64(cr + j);
        float64x2_t vci = vld1q_f64(ci + j);
        ar = vfmaq_f64(ar, vcr, qr);
        ar = vfmsq_f64(ar, vci, npi);
        ai = vfmaq_f64(ai, vcr, npi);
        ai = vfmaq_f64(ai, vci, qr);
    }
    double accr = hsum(ar), acci = hsum(ai);
    for (; j < n; ++j) {
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

double neon_pv_accumulate(std::size_t n, const double* w, const double* f,
                          double f0, const double* x, double x0) {
    const float64x2_t vf0 = vdupq_n_f64(f0);
    const float64x2_t vx0 = vdupq_n_f64(x0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        float64x2_t num =
            vmulq_f64(vld1q_f64(w + j), vsubq_f64(vld1q_f64(f + j), vf0));
        float64x2_t den = vsubq_f64(vx0, vld1q_f64(x + j));
        acc = vaddq_f64(acc, vdivq_f64(num, den));
    }
    double s = hsum(acc);
    for (; j < n; ++j)
        s += w[j] * (f[j] - f0) / (x0 - x[j]);
    return s;
}

void neon_axpy(std::size_t n, double c, const double* b, const double* a,
               double* y) {
    const float64x2_t vc = vdupq_n_f64(c);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2)
        vst1q_f64(y + j, vfmaq_f64(vld1q_f64(a + j), vc, vld1q_f64(b + j)));
    for (; j < n; ++j)
        y[j] = a[j] + c * b[j];
}

double neon_norm2(std::size_t n, const double* xr, const double* xi) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        float64x2_t r = vld1q_f64(xr + j);
        float64x2_t i = vld1q_f64(xi + j);
        acc = vfmaq_f64(acc, r, r);
        acc = vfmaq_f64(acc, i, i);
    }
    double s = hsum(acc);
    for (; j < n; ++j)
        s += xr[j] * xr[j] + xi[j] * xi[j];
    return s;
}

} // namespace

const Ops neon_ops = {neon_cdot,         neon_spin_stage, neon_phasor_step,
                      neon_pv_accumulate, neon_axpy,      neon_norm2};

} // namespace revivals::kern

#endif // aarch64
