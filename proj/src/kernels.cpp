// kernels.cpp — backend resolution and dispatched entry points.

#include "revivals/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace revivals::kern {
namespace {

const Ops* g_ops = nullptr;
Backend g_backend = Backend::scalar;

Backend detect() {
#if defined(__aarch64__)
    return Backend::neon;
#elif defined(__x86_64__) || defined(_M_X64)
#if defined(__GNUC__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::avx2;
#endif
    return Backend::scalar;
#else
    return Backend::scalar;
#endif
}

const Ops* table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &scalar_ops;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return &avx2_ops;
#else
        return nullptr;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return &neon_ops;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

void resolve() {
    if (g_ops)
        return;
    Backend b = detect();
    if (const char* env = std::getenv("REVIVALS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            b = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0 && backend_available(Backend::avx2))
            b = Backend::avx2;
        else if (std::strcmp(env, "neon") == 0 && backend_available(Backend::neon))
            b = Backend::neon;
    }
    g_backend = b;
    g_ops = table_for(b);
}

inline const Ops& ops() {
    if (!g_ops)
        resolve();
    return *g_ops;
}

} // namespace

Backend active_backend() {
    if (!g_ops)
        resolve();
    return g_backend;
}

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    case Backend::neon:
        return "neon";
    }
    return "?";
}

bool backend_available(Backend b) {
    if (b == Backend::scalar)
        return true;
    if (b != detect())
        return false;
    return table_for(b) != nullptr;
}

void force_backend(Backend b) {
    if (!backend_available(b))
        throw std::invalid_argument(std::string("kernel backend not available: ") +
                                    backend_name(b));
    g_backend = b;
    g_ops = table_for(b);
}

Cplx cdot(const double* ar, const double* ai, const double* br,
          const double* bi, std::size_t n) {
    return ops().cdot(ar, ai, br, bi, n);
}

Cplx spin_stage(std::size_t n, double gamma, const double* delta,
                const double* g, double a_re, double a_im, const double* br,
                const double* bi, double* dbr, double* dbi) {
    return ops().spin_stage(n, gamma, delta, g, a_re, a_im, br, bi, dbr, dbi);
}

Cplx phasor_step(std::size_t n, const double* cr, const double* ci, double* pr,
                 double* pi, const double* sr, const double* si) {
    return ops().phasor_step(n, cr, ci, pr, pi, sr, si);
}

double pv_accumulate(std::size_t n, const double* w, const double* f,
                     double f0, const double* x, double x0) {
    return ops().pv_accumulate(n, w, f, f0, x, x0);
}

void axpy(std::size_t n, double c, const double* b, const double* a,
          double* y) {
    ops().axpy(n, c, b, a, y);
}

double norm2(std::size_t n, const double* xr, const double* xi) {
    return ops().norm2(n, xr, xi);
}

} // namespace revivals::kern
