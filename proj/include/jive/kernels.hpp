#pragma once

#include <cstddef>

namespace jive::kernels {

// Primitive vector kernels under the dense linear-algebra layer. Every entry
// has a scalar reference implementation; on x86-64 an AVX2+FMA variant is
// selected at runtime. SIMD variants use fixed-order lane reduction, so a
// given backend is bit-deterministic run to run (scalar and AVX2 results may
// differ in the last ulps; equivalence is tested at tolerance).
struct Backend {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x *= a
    void (*scal)(double a, double* x, std::size_t n);
    // Givens plane rotation, in place:
    //   x' = c*x - s*y
    //   y' = s*x + c*y
    void (*rot)(double* x, double* y, double c, double s, std::size_t n);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
bool avx2_supported();
#endif

// Active backend: JIVE_KERNELS=scalar|avx2 overrides, otherwise CPU detection.
// Resolved once on first use.
const Backend& active();

}  // namespace jive::kernels
