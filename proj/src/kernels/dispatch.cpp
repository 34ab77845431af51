#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "tsdyn/kernels.hpp"

namespace tsdyn::kernels {

namespace {

Backend detect() {
    if (const char* env = std::getenv("TSDYN_KERNELS"); env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
    return cpu_supports(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{detect()};
    return b;
}

}  // namespace

bool cpu_supports(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!cpu_supports(b)) throw std::runtime_error("CPU does not support the requested kernel backend");
    current().store(b, std::memory_order_relaxed);
}

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

double dot(const double* x, const double* y, std::size_t n) {
    return active_backend() == Backend::avx2 ? avx2::dot(x, y, n) : scalar::dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    if (active_backend() == Backend::avx2)
        avx2::axpy(a, x, y, n);
    else
        scalar::axpy(a, x, y, n);
}

void hadamard(const double* x, double* y, std::size_t n) {
    if (active_backend() == Backend::avx2)
        avx2::hadamard(x, y, n);
    else
        scalar::hadamard(x, y, n);
}

double gather_dot(const double* base, const std::int32_t* idx, const double* w, std::size_t n) {
    return active_backend() == Backend::avx2 ? avx2::gather_dot(base, idx, w, n) : scalar::gather_dot(base, idx, w, n);
}

}  // namespace tsdyn::kernels
