// kernels_avx2.cpp — AVX2+FMA variants, 4 doubles per lane. Compiled with
// per-function target attributes so the TU builds without global -mavx2;
// the dispatcher only selects these after a cpuid check.

#include "revivals/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define REVIVALS_AVX2 __attribute__((target("avx2,fma")))

namespace revivals::kern {
namespace {

REVIVALS_AVX2 inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

REVIVALS_AVX2 Cplx avx2_cdot(const double* ar, const double* ai,
                             const double* br, const double* bi,
                             std::size_t n) {
    // Two independent accumulator pairs to break the FMA dependency chain.
    __m256d sr0 = _mm256_setzero_pd(), si0 = _mm256_setzero_pd();
    __m256d sr1 = _mm256_setzero_pd(), si1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        __m256d xr = _mm256_loadu_pd(ar + j);
        __m256d xi = _mm256_loadu_pd(ai + j);
        __m256d yr = _mm256_loadu_pd(br + j);
        __m256d yi = _mm256_loadu_pd(bi + j);
        sr0 = _mm256_fmadd_pd(xr, yr, sr0);
        sr0 = _mm256_fnmadd_pd(xi, yi, sr0);
        si0 = _mm256_fmadd_pd(xr, yi, si0);
        si0 = _mm256_fmadd_pd(xi, yr, si0);
        xr = _mm256_loadu_pd(ar + j + 4);
        xi = _mm256_loadu_pd(ai + j + 4);
        yr = _mm256_loadu_pd(br + j + 4);
        yi = _mm256_loadu_pd(bi + j + 4);
        sr1 = _mm256_fmadd_pd(xr, yr, sr1);
        sr1 = _mm256_fnmadd_pd(xi, yi, sr1);
        si1 = _mm256_fmadd_pd(xr, yi, si1);
        si1 = _mm256_fmadd_pd(xi, yr, si1);
    }
    for (; j + 4 <= n; j += 4) {
        __m256d xr = _mm256_loadu_pd(ar + j);
        __m256d xi = _mm256_loadu_pd(ai + j);
        __m256d yr = _mm256_loadu_pd(br + j);
        __m256d yi = _mm256_loadu_pd(bi + j);
        sr0 = _mm256_fmadd_pd(xr, yr, sr0);
        sr0 = _mm256_fnmadd_pd(xi, yi, sr0);
        si0 = _mm256_fmadd_pd(xr, yi, si0);
        si0 = _mm256_fmadd_pd(xi, yr, si0);
    }
    double sr = hsum(_mm256_add_pd(sr0, sr1));
    double si = hsum(_mm256_add_pd(si0, si1));
    for (; j < n; ++j) {
        sr += ar[j] * br[j] - ai[j] * bi[j];
        si += ar[j] * bi[j] + ai[j] * br[j];
    }
    return {sr, si};
}

REVIVALS_AVX2 Cplx avx2_spin_stage(std::size_t n, double gamma,
                                   const double* delta, const double* g,
                                   double a_re, double a_im, const double* br,
                                   const double* bi, double* dbr,
                                   double* dbi) {
    const __m256d vg = _mm256_set1_pd(gamma);
    const __m256d var = _mm256_set1_pd(a_re);
    const __m256d vai = _mm256_set1_pd(a_im);
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    std::size_t l = 0;
    for (; l + 4 <= n; l += 4) {
        __m256d vbr = _mm256_loadu_pd(br + l);
        __m256d vbi = _mm256_loadu_pd(bi + l);
        __m256d vd = _mm256_loadu_pd(delta + l);
        __m256d vgl = _mm256_loadu_pd(g + l);
        // dbr = -gamma*br + delta*bi - g*a_re
        __m256d r = _mm256_fmsub_pd(vd, vbi, _mm256_mul_pd(vg, vbr));
        r = _mm256_fnmadd_pd(vgl, var, r);
        _mm256_storeu_pd(dbr + l, r);
        // dbi = -gamma*bi - delta*br - g*a_im
        __m256d s = _mm256_fnmsub_pd(vd, vbr, _mm256_mul_pd(vg, vbi));
        s = _mm256_fnmadd_pd(vgl, vai, s);
        _mm256_storeu_pd(dbi + l, s);
        sr = _mm256_fmadd_pd(vgl, vbr, sr);
        si = _mm256_fmadd_pd(vgl, vbi, si);
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

REVIVALS_AVX2 Cplx avx2_phasor_step(std::size_t n, const double* cr,
                                    const double* ci, double* pr, double* pi,
                                    const double* sr, const double* si) {
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d vpr = _mm256_loadu_pd(pr + j);
        __m256d vpi = _mm256_loadu_pd(pi + j);
        __m256d vsr = _mm256_loadu_pd(sr + j);
        __m256d vsi = _mm256_loadu_pd(si + j);
        __m256d npr = _mm256_fmsub_pd(vpr, vsr, _mm256_mul_pd(vpi, vsi));
        __m256d npi = _mm256_fmadd_pd(vpr, vsi, _mm256_mul_pd(vpi, vsr));
        _mm256_storeu_pd(pr + j, npr);
        _mm256_storeu_pd(pi + j, npi);
        __m256d qr = _mm256_sub_pd(npr, one);
        __m256d vcr = _mm256_loadu_pd(cr + j);
        __m256d vci = _mm256_loadu_pd(ci + j);
        ar = _mm256_fmadd_pd(vcr, qr, ar);
        ar = _mm256_fnmadd_pd(vci, npi, ar);
        ai = _mm256_fmadd_pd(vcr, npi, ai);
        ai = _mm256_fmadd_pd(vci, qr, ai);
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

REVIVALS_AVX2 double avx2_pv_accumulate(std::size_t n, const double* w,
                                        const double* f, double f0,
                                        const double* x, double x0) {
    const __m256d vf0 = _mm256_set1_pd(f0);
    const __m256d vx0 = _mm256_set1_pd(x0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d num = _mm256_mul_pd(
            _mm256_loadu_pd(w + j),
            _mm256_sub_pd(_mm256_loadu_pd(f + j), vf0));
        __m256d den = _mm256_sub_pd(vx0, _mm256_loadu_pd(x + j));
        acc = _mm256_add_pd(acc, _mm256_div_pd(num, den));
    }
    double s = hsum(acc);
    for (; j < n; ++j)
        s += w[j] * (f[j] - f0) / (x0 - x[j]);
    return s;
}

REVIVALS_AVX2 void avx2_axpy(std::size_t n, double c, const double* b,
                             const double* a, double* y) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d r = _mm256_fmadd_pd(vc, _mm256_loadu_pd(b + j),
                                    _mm256_loadu_pd(a + j));
        _mm256_storeu_pd(y + j, r);
    }
    for (; j < n; ++j)
        y[j] = a[j] + c * b[j];
}

REVIVALS_AVX2 double avx2_norm2(std::size_t n, const double* xr,
                                const double* xi) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d r = _mm256_loadu_pd(xr + j);
        __m256d i = _mm256_loadu_pd(xi + j);
        acc = _mm256_fmadd_pd(r, r, acc);
        acc = _mm256_fmadd_pd(i, i, acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j)
        s += xr[j] * xr[j] + xi[j] * xi[j];
    return s;
}

} // namespace

const Ops avx2_ops = {avx2_cdot,         avx2_spin_stage, avx2_phasor_step,
                      avx2_pv_accumulate, avx2_axpy,      avx2_norm2};

} // namespace revivals::kern

#endif // x86-64
