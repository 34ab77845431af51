#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tsdyn/kernels.hpp"

namespace k = tsdyn::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double abs_sum(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
    return s;
}

}  // namespace

TEST_CASE("scalar kernels match plain loops exactly") {
    std::mt19937_64 rng(1);
    for (std::size_t n : {0u, 1u, 7u, 64u}) {
        const auto x = random_vec(rng, n), y = random_vec(rng, n);
        double ref = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            volatile double prod = x[i] * y[i];  // keep the compiler from fusing into an FMA
            ref += prod;
        }
        CHECK(k::scalar::dot(x.data(), y.data(), n) == ref);
    }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!k::cpu_supports(k::Backend::avx2)) {
        MESSAGE("CPU lacks AVX2/FMA; equivalence test skipped");
        return;
    }
    std::mt19937_64 rng(2);
    for (std::size_t n = 0; n <= 67; ++n) {
        const auto x = random_vec(rng, n), y = random_vec(rng, n);
        const double tol = 4.0 * n * 1.2e-16 * abs_sum(x, y) + 1e-300;

        CHECK(std::abs(k::avx2::dot(x.data(), y.data(), n) - k::scalar::dot(x.data(), y.data(), n)) <= tol);

        auto ya = y, ys = y;
        k::avx2::axpy(-0.75, x.data(), ya.data(), n);
        k::scalar::axpy(-0.75, x.data(), ys.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ya[i] - ys[i]) <= 2.3e-16 * (std::abs(ys[i]) + 0.75 * std::abs(x[i])));

        auto ha = y, hs = y;
        k::avx2::hadamard(x.data(), ha.data(), n);
        k::scalar::hadamard(x.data(), hs.data(), n);
        CHECK(ha == hs);

        std::vector<std::int32_t> idx(n);
        std::uniform_int_distribution<std::int32_t> pick(0, static_cast<std::int32_t>(n ? n - 1 : 0));
        for (auto& i : idx) i = pick(rng);
        const double ga = k::avx2::gather_dot(x.data(), idx.data(), y.data(), n);
        const double gs = k::scalar::gather_dot(x.data(), idx.data(), y.data(), n);
        double gabs = 0.0;
        for (std::size_t t = 0; t < n; ++t) gabs += std::abs(y[t] * x[idx[t]]);
        CHECK(std::abs(ga - gs) <= 4.0 * n * 1.2e-16 * gabs + 1e-300);
    }
}

TEST_CASE("runtime dispatch follows the selected backend") {
    const k::Backend before = k::active_backend();
    std::mt19937_64 rng(3);
    const auto x = random_vec(rng, 37), y = random_vec(rng, 37);

    k::set_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    CHECK(k::dot(x.data(), y.data(), 37) == k::scalar::dot(x.data(), y.data(), 37));

    if (k::cpu_supports(k::Backend::avx2)) {
        k::set_backend(k::Backend::avx2);
        CHECK(k::dot(x.data(), y.data(), 37) == k::avx2::dot(x.data(), y.data(), 37));
    } else {
        CHECK_THROWS(k::set_backend(k::Backend::avx2));
    }
    CHECK(k::to_string(k::Backend::scalar) == "scalar");
    k::set_backend(before);
}
