// Reference implementations. Built with auto-vectorization disabled so that
// they stay an independent baseline for the SIMD variants.
#include "tsdyn/kernels.hpp"

namespace tsdyn::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void hadamard(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * base[idx[i]];
    return s;
}

}  // namespace tsdyn::kernels::scalar
