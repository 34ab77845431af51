#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsdyn {

// One value of a symmetric block matrix; only row <= col is stored and the
// value stands for both (row, col) and (col, row).
struct SdpEntry {
    std::uint32_t block = 0;
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;

    bool operator==(const SdpEntry&) const = default;
};

struct FreeTerm {
    std::uint32_t var = 0;
    double value = 0.0;

    bool operator==(const FreeTerm&) const = default;
};

struct SdpEquality {
    std::string label;
    std::vector<SdpEntry> entries;
    std::vector<FreeTerm> free_terms;
    double rhs = 0.0;
};

struct PsdBlock {
    std::string label;
    std::size_t dim = 0;
};

// minimize   <C, X> + c'x
// subject to <A_i, X> + B_i x = b_i,  X = diag(X_1, ..., X_K) PSD,  x free.
struct SdpProblem {
    std::vector<PsdBlock> psd_blocks;
    std::vector<std::string> free_vars;
    std::vector<SdpEquality> equalities;
    std::vector<SdpEntry> objective_entries;  // C
    std::vector<double> objective_free;       // c; empty means zero
    std::map<std::string, std::string> metadata;

    std::size_t num_blocks() const { return psd_blocks.size(); }
    std::size_t num_free() const { return free_vars.size(); }
    std::size_t num_equalities() const { return equalities.size(); }
    // sum over blocks of n(n+1)/2
    std::size_t num_gram_scalars() const;

    // throws std::invalid_argument on out-of-range references or row > col
    void validate() const;
    // entries sorted (block, row, col), duplicates merged, exact zeros dropped
    SdpProblem normalized() const;
};

using BlockMatrices = std::vector<Eigen::MatrixXd>;

// <A_i, X> + B_i x for every equality
Eigen::VectorXd apply_constraints(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x);
// sum_i y_i A_i, per block
BlockMatrices apply_adjoint(const SdpProblem& p, const Eigen::VectorXd& y);
double primal_objective(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x);

// Text summary of block sizes and counts; stable across runs.
std::string problem_digest(const SdpProblem& p);

enum class SolveStatus { optimal, near_optimal, max_iter, infeasible_flag };

std::string to_string(SolveStatus s);

enum class SearchDirection { hkm, nt };

struct SolverOptions {
    double tol = 1e-7;          // gap and feasibility tolerance for "optimal"
    double near_tol = 1e-5;     // looser bound for "near_optimal"
    int max_iter = 200;
    double step_fraction = 0.95;
    SearchDirection direction = SearchDirection::nt;
    bool verbose = false;       // per-iteration lines on stderr
};

struct IterationLog {
    int iter = 0;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double primal_infeas = 0.0;
    double dual_infeas = 0.0;
    double gap = 0.0;
    double mu = 0.0;
    double step_primal = 0.0;
    double step_dual = 0.0;
};

struct SdpResiduals {
    double primal_infeas = 0.0;  // ||b - A(X) - Bx|| / (1 + ||b|| + ||(X, x)||)
    double dual_infeas = 0.0;    // ||(C - Z - A*y, c - B'y)|| / (1 + ||(C, c)|| + ||Z||)
    double gap = 0.0;            // |pobj - dobj| / (1 + |pobj| + |dobj|)
    double complementarity = 0.0;  // <X, Z> / (1 + |pobj| + |dobj|)
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double min_eig_x = 0.0;      // min over blocks of lambda_min(X_k) / (1 + ||X_k||)
    double min_eig_z = 0.0;
};

struct SdpSolution {
    SolveStatus status = SolveStatus::max_iter;
    double objective = 0.0;  // primal objective of the returned iterate
    BlockMatrices block_values;   // X
    BlockMatrices dual_slacks;    // Z
    Eigen::VectorXd free_values;  // x
    Eigen::VectorXd multipliers;  // y
    SdpResiduals residuals;
    int iterations = 0;
    std::vector<IterationLog> trace;

    double free_value(const SdpProblem& p, const std::string& label) const;
};

// Raised when the Newton system breaks down before a usable iterate exists.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, std::vector<IterationLog> trace)
        : std::runtime_error(msg), trace_(std::move(trace)) {}
    const std::vector<IterationLog>& trace() const { return trace_; }

private:
    std::vector<IterationLog> trace_;
};

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

// Residuals recomputed from scratch for an arbitrary iterate.
SdpResiduals evaluate_residuals(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y, const BlockMatrices& Z);

// SDPA sparse format. The problem is written as SDPA's dual side: F_i = A_i,
// c = b, F_0 = -C, so the SDPA objective is the negated optimum. Free
// variables become a diagonal block of size -2*nfree holding (x+, x-).
std::string export_sdpa(const SdpProblem& problem);
// Inverse of export_sdpa (labels are regenerated).
SdpProblem parse_sdpa(const std::string& text);

// objective, status, residuals and eigenvalues of each block
void write_solution(std::ostream& os, const SdpProblem& p, const SdpSolution& s);

}  // namespace tsdyn
