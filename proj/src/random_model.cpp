#include "tsdyn/random_model.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace tsdyn {

RandomModel random_model(std::size_t n, std::uint64_t seed) {
    if (n < 5) throw std::invalid_argument("random model needs n >= 5 (n - 4 edges)");
    if (n > 64) throw std::invalid_argument("random model supports at most 64 variables");
    RandomModel rm;
    rm.n = n;
    rm.seed = seed;
    std::mt19937_64 rng(seed);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    rm.edges.assign(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(n - 4));
    std::sort(rm.edges.begin(), rm.edges.end());

    std::uniform_real_distribution<double> diag(1.0, 2.0);
    std::uniform_real_distribution<double> off(-0.5, 0.5);
    const auto N = static_cast<Eigen::Index>(n);
    for (rm.draws = 1;; ++rm.draws) {
        if (rm.draws > 1000) throw std::runtime_error("random model: no positive definite B within 1000 draws");
        rm.B = Eigen::MatrixXd::Zero(N, N);
        for (Eigen::Index i = 0; i < N; ++i) rm.B(i, i) = diag(rng);
        for (const auto& [i, j] : rm.edges) {
            const double v = off(rng);
            rm.B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            rm.B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(rm.B);
        if (llt.info() == Eigen::Success) break;
    }

    ProblemFile& pf = rm.problem;
    pf.name = "random-n" + std::to_string(n) + "-seed" + std::to_string(seed);
    DynamicalSystem& sys = pf.system;
    sys.variables = default_variable_names(n);
    Polynomial q = Polynomial::constant(n, -1.0);
    for (std::size_t i = 0; i < n; ++i) {
        Exponent a(n);
        a.set(i, 2);
        q.add_term(a, rm.B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    }
    for (const auto& [i, j] : rm.edges) {
        Exponent a(n);
        a.set(i, 1);
        a.set(j, 1);
        q.add_term(a, 2.0 * rm.B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    for (std::size_t i = 0; i < n; ++i) sys.field.push_back(q * Polynomial::variable(n, i));
    pf.box = Box::cube(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Polynomial xi = Polynomial::variable(n, i);
        sys.constraints.push_back(Polynomial::constant(n, 1.0) - xi * xi);
    }
    return rm;
}

}  // namespace tsdyn
