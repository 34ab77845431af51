#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsdyn/problem_io.hpp"
#include "tsdyn/relax.hpp"
#include "tsdyn/sdp.hpp"

namespace tsdyn {

// Block sizes of one certificate family (a, b or c), largest first.
struct FamilyBlocks {
    std::string family;
    std::vector<std::size_t> sizes;
};

struct RunReport {
    std::string name;
    RelaxationConfig config;

    // chain summary (term sparsity only): |A^k| and |B^k| per step, and the
    // step at which each chain reached its fixed point (0 = not reached)
    std::vector<std::size_t> a_sizes;
    std::vector<std::size_t> b_sizes;
    int s_stable = 0;
    int l_stable = 0;
    std::size_t symmetry_rank = 0;  // sign symmetry only

    std::vector<FamilyBlocks> blocks;
    std::size_t num_blocks = 0;
    std::size_t max_block = 0;
    std::size_t equalities = 0;
    std::size_t free_vars = 0;
    std::size_t gram_scalars = 0;
    std::string digest;

    SolveStatus status = SolveStatus::max_iter;
    double objective = 0.0;
    SdpResiduals residuals;
    int iterations = 0;
    double assemble_seconds = 0.0;
    double solve_seconds = 0.0;

    double cert_residual = 0.0;
    bool cert_ok = false;
    double cert_objective = 0.0;
};

// Fills the structural part of a report (everything before the solve).
RunReport describe(const std::string& name, const Relaxation& relax);

// Throws std::logic_error if the report's block counts disagree with the
// problem digest.
void cross_check(const RunReport& report, const SdpProblem& problem);

struct RunResult {
    RunReport report;
    Relaxation relax;
    SdpSolution solution;
    CertificateSet certificate;
};

RunResult run_relaxation(const ProblemFile& pf, const RelaxationConfig& config, const SolverOptions& options = {});

void write_report(std::ostream& os, const RunReport& r);

// CSV with a fixed header; see csv_header().
std::string csv_header();
std::string csv_row(const RunReport& r);

// One cell of a comparison sweep: a mode with its own s (TS only).
struct CompareCell {
    int d = 1;
    Mode mode = Mode::term_sparsity;
    int s = 1;
    std::optional<RunReport> report;
    std::string error;
};

// Parses "ts", "ts:2", "ss", "fd".
CompareCell parse_cell_mode(const std::string& token);

// Runs every (d, mode) pair; failed cells keep their error text. Cells run on
// up to `jobs` threads; results come back in (d, mode) order.
std::vector<CompareCell> compare(const ProblemFile& pf, const RelaxationConfig& base, const std::vector<int>& orders,
                                 const std::vector<CompareCell>& modes, int jobs, const SolverOptions& options = {});

// Aligned text table and the qualitative checks (monotone in d, TS >= SS,
// SS == FD within 1e-4 relative), one line per check.
void write_compare_table(std::ostream& os, const std::vector<CompareCell>& cells);
std::vector<std::string> compare_checks(const std::vector<CompareCell>& cells, double rel_tol = 1e-4);

}  // namespace tsdyn
