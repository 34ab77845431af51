#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsdyn/graphs.hpp"
#include "tsdyn/poly.hpp"
#include "tsdyn/symmetry.hpp"

namespace tsdyn {

enum class Mode { term_sparsity, sign_symmetry, fully_dense };

std::string to_string(Mode m);
Mode parse_mode(const std::string& name);

struct RelaxationConfig {
    int d = 1;        // relaxation order; polynomials up to degree 2d
    int s = 1;        // v-side iterations
    int l = 1;        // w-side iterations
    double beta = 1.0;  // discount factor
    ChordalExtension extension = ChordalExtension::maximal;
    Mode mode = Mode::term_sparsity;

    // throws std::invalid_argument on bad values or d below the system's minimum order
    void validate(const DynamicalSystem& sys) const;
};

// Ascending chains of supports with the (extended) sparsity graphs built at
// each step. a_sets[k] is A^{k+1}; g_graphs[k][j] is (G^{k+1}_j)'. The chain
// stores one more support than graphs, so stabilization can be read off the
// last two entries. The w side is indexed the same way by l.
struct SupportChain {
    std::vector<SupportSet> a_sets;
    std::vector<std::vector<ChordalGraph>> g_graphs;
    std::vector<SupportSet> b_sets;
    std::vector<std::vector<ChordalGraph>> h_graphs;
    bool stabilized_s = false;
    bool stabilized_l = false;

    // support/graphs to use for a requested s (clamped to the fixed point)
    std::size_t v_step(int s) const;
    std::size_t w_step(int l) const;
};

// monomial basis N^n_{d - ceil(d_j/2)} for the Gram matrix paired with p_j
SupportSet gram_basis(const DynamicalSystem& sys, int d, std::size_t j);

SupportSet initial_support(const DynamicalSystem& sys, int d);

MonomialGraph build_g_graph(const DynamicalSystem& sys, int d, const SupportSet& a_set, std::size_t j);
MonomialGraph build_h_graph(const DynamicalSystem& sys, int d, const SupportSet& b_set, std::size_t j);

SupportChain iterate_v_chain(const DynamicalSystem& sys, int d, ChordalExtension extension, int s_max);

// Fills the w side of `chain` starting from B^{s,1} = a_set_s.
void iterate_w_chain(SupportChain& chain, const DynamicalSystem& sys, int d, const SupportSet& a_set_s,
                     ChordalExtension extension, int l_max);

// Gram block layout of one certificate family: for every j, the basis and the
// cliques (indices into that basis) that get their own PSD block.
struct GramLayout {
    std::vector<SupportSet> bases;
    std::vector<CliqueSet> cliques;
};

// Everything the assembler needs: supports of v and w, the Gram layout for
// a_j (v side) and for b_j / c_j (w side).
struct BlockStructure {
    SupportSet v_support;
    SupportSet w_support;
    GramLayout a_layout;
    GramLayout bc_layout;
    std::optional<SupportChain> chain;           // term sparsity only
    std::optional<SignSymmetryGroup> symmetry;   // sign symmetry only
};

BlockStructure block_structure(const DynamicalSystem& sys, const RelaxationConfig& config);

// Text listing of each A and B set, one set per line in graded-lex order.
void write_chain(std::ostream& os, const SupportChain& chain, const std::vector<std::string>& variables);

}  // namespace tsdyn
