#include "tsdyn/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define TSDYN_X86 1
#define TSDYN_AVX2_TARGET __attribute__((target("avx2,fma")))
#else
#define TSDYN_X86 0
#endif

namespace tsdyn::kernels::avx2 {

#if TSDYN_X86

namespace {

TSDYN_AVX2_TARGET inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

TSDYN_AVX2_TARGET double dot(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

TSDYN_AVX2_TARGET void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

TSDYN_AVX2_TARGET void hadamard(const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] *= x[i];
}

TSDYN_AVX2_TARGET double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        const __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_i32gather_pd(base, i0, 8), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_i32gather_pd(base, i1, 8), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_i32gather_pd(base, i0, 8), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += w[i] * base[idx[i]];
    return s;
}

#else

// Non-x86 builds never select this backend; forward to the reference code.
double dot(const double* x, const double* y, std::size_t n) { return scalar::dot(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { scalar::axpy(a, x, y, n); }
void hadamard(const double* x, double* y, std::size_t n) { scalar::hadamard(x, y, n); }
double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n) {
    return scalar::gather_dot(base, idx, w, n);
}

#endif

}  // namespace tsdyn::kernels::avx2
