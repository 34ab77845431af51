#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tsdyn/poly.hpp"
#include "tsdyn/sdp.hpp"
#include "tsdyn/sparsity.hpp"

namespace tsdyn {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box cube(std::size_t dim, double radius = 1.0);
    std::size_t dim() const { return lo.size(); }
    double volume() const;
    void validate(std::size_t dim) const;
};

// integral of x^alpha over the box
double box_moment(const Exponent& alpha, const Box& box);

// The polynomial behind a certificate slot: which family (a, b or c), which
// constraint p_j, and the monomials indexing the block.
enum class Certificate { a, b, c };

struct BlockOrigin {
    Certificate family = Certificate::a;
    std::size_t j = 0;
    std::size_t clique = 0;
    std::vector<Exponent> monomials;
};

struct Relaxation {
    SdpProblem problem;
    BlockStructure structure;
    std::vector<BlockOrigin> origins;  // parallel to problem.psd_blocks
    std::vector<Exponent> v_exponents;  // free vars [0, nv)
    std::vector<Exponent> w_exponents;  // free vars [nv, nv + nw)
    DynamicalSystem system;
    RelaxationConfig config;
    Box box;
};

// Builds the block SDP
//   min  sum_a w_a * box_moment(a)
//   s.t. beta*v - grad(v).f = sum_j a_j p_j
//        w               = sum_j b_j p_j
//        w - v - 1       = sum_j c_j p_j
// with one PSD block per clique of each Gram layout. Gram entries shared by
// overlapping cliques are separate variables summed in the equalities.
Relaxation assemble(const DynamicalSystem& sys, const Box& box, const RelaxationConfig& config);

struct CertificateSet {
    Polynomial v;
    Polynomial w;
    std::map<std::string, Eigen::MatrixXd> gram_blocks;  // by block label
    // largest |coefficient| of the three identity residuals, and the bound it
    // was checked against (1e-6 * (1 + max coefficient))
    double max_residual = 0.0;
    double residual_bound = 0.0;
    bool residual_ok = false;
    double min_gram_eigenvalue = 0.0;  // relative to 1 + ||block||
    double objective = 0.0;            // integral of w over the box
};

// Maps block values and free values back to v, w and the Gram blocks, and
// re-checks the identities in exact polynomial arithmetic.
CertificateSet recover(const Relaxation& relax, const BlockMatrices& blocks, const Eigen::VectorXd& free_values);
CertificateSet recover(const Relaxation& relax, const SdpSolution& solution);

struct GridPoint {
    std::vector<double> x;
    double w = 0.0;
};

// Evaluates p at every column of `points` (dim x count).
Eigen::VectorXd eval_batch(const Polynomial& p, const Eigen::MatrixXd& points);

// Grid points of the box with w(x) >= 1; `resolution` points per axis.
std::vector<GridPoint> outer_approx_grid(const Polynomial& w, const Box& box, const std::vector<int>& resolution);
void write_grid_csv(std::ostream& os, const std::vector<GridPoint>& pts, const std::vector<std::string>& variables);

}  // namespace tsdyn
