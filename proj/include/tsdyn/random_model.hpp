#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "tsdyn/problem_io.hpp"

namespace tsdyn {

// dx_i/dt = (x'Bx - 1) x_i on [-1, 1]^n, with B supported on a random graph
// with n nodes and n - 4 edges.
struct RandomModel {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
    Eigen::MatrixXd B;
    int draws = 0;  // B samples until positive definite
    ProblemFile problem;
};

// Edge set: seeded shuffle of all pairs, first n - 4 kept. B_ii ~ U[1, 2],
// B_ij ~ U[-0.5, 0.5] on edges; resampled until positive definite (at most
// 1000 draws). Requires n >= 5.
RandomModel random_model(std::size_t n, std::uint64_t seed);

}  // namespace tsdyn
