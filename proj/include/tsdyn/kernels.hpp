#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops with a portable scalar reference and an AVX2/FMA
// variant chosen at runtime. Both variants must agree to rounding; see
// tests/test_kernels.cpp.
namespace tsdyn::kernels {

enum class Backend { scalar, avx2 };

// Backend in use. Defaults to the best one the CPU supports; the environment
// variable TSDYN_KERNELS=scalar forces the reference path.
Backend active_backend();
void set_backend(Backend b);  // throws if the CPU lacks the requested ISA
bool cpu_supports(Backend b);
std::string_view to_string(Backend b);

double dot(const double* x, const double* y, std::size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
// y[i] *= x[i]
void hadamard(const double* x, double* y, std::size_t n);
// sum_t w[t] * base[idx[t]]
double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n);

// Explicit variants, exposed for equivalence tests and benchmarks.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void hadamard(const double* x, double* y, std::size_t n);
double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void hadamard(const double* x, double* y, std::size_t n);
double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n);
}  // namespace avx2

}  // namespace tsdyn::kernels
