// kernels.hpp — data-parallel inner loops: scalar reference implementations
// plus AVX2 (x86-64) and NEON (aarch64) variants selected at runtime.
//
// Complex data is split-layout (separate re/im arrays). Every variant of a
// kernel computes the same quantity; variants may reassociate sums, so
// results agree to rounding, not bitwise. The active backend is resolved
// once per process (cpuid on x86-64) and can be overridden with
// force_backend() or the REVIVALS_KERNELS environment variable
// (values: scalar, avx2, neon).

#pragma once

#include <cstddef>

namespace revivals::kern {

enum class Backend { scalar, avx2, neon };

struct Cplx {
    double re{0.0};
    double im{0.0};
};

// Kernel function table; one instance per backend.
struct Ops {
    // sum_j (ar[j] + i*ai[j]) * (br[j] + i*bi[j])   (no conjugation)
    Cplx (*cdot)(const double* ar, const double* ai,
                 const double* br, const double* bi, std::size_t n);

    // Spin-block right-hand side and coupling reduction in one pass:
    //   dbr[l] = -gamma*br[l] + delta[l]*bi[l] - g[l]*a_re
    //   dbi[l] = -gamma*bi[l] - delta[l]*br[l] - g[l]*a_im
    // returns sum_l g[l] * (br[l] + i*bi[l])
    Cplx (*spin_stage)(std::size_t n, double gamma, const double* delta,
                       const double* g, double a_re, double a_im,
                       const double* br, const double* bi,
                       double* dbr, double* dbi);

    // Phasor step-then-accumulate (one lag of a kernel/trajectory quadrature):
    //   for each node: p[j] *= s[j];  acc += c[j] * (p[j] - 1)
    Cplx (*phasor_step)(std::size_t n, const double* cr, const double* ci,
                        double* pr, double* pi,
                        const double* sr, const double* si);

    // sum_j w[j] * (f[j] - f0) / (x0 - x[j])   (PV singularity subtraction)
    double (*pv_accumulate)(std::size_t n, const double* w, const double* f,
                            double f0, const double* x, double x0);

    // y[j] = a[j] + c * b[j]
    void (*axpy)(std::size_t n, double c, const double* b, const double* a,
                 double* y);

    // sum_j (xr[j]^2 + xi[j]^2)
    double (*norm2)(std::size_t n, const double* xr, const double* xi);
};

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif

Backend active_backend();
const char* backend_name(Backend b);
bool backend_available(Backend b);
void force_backend(Backend b); // throws std::invalid_argument if unsupported

// Dispatched entry points.
Cplx cdot(const double* ar, const double* ai, const double* br,
          const double* bi, std::size_t n);
Cplx spin_stage(std::size_t n, double gamma, const double* delta,
                const double* g, double a_re, double a_im, const double* br,
                const double* bi, double* dbr, double* dbi);
Cplx phasor_step(std::size_t n, const double* cr, const double* ci, double* pr,
                 double* pi, const double* sr, const double* si);
double pv_accumulate(std::size_t n, const double* w, const double* f,
                     double f0, const double* x, double x0);
void axpy(std::size_t n, double c, const double* b, const double* a, double* y);
double norm2(std::size_t n, const double* xr, const double* xi);

} // namespace revivals::kern
