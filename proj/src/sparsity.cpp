#include "tsdyn/sparsity.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace tsdyn {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::term_sparsity: return "ts";
        case Mode::sign_symmetry: return "ss";
        case Mode::fully_dense: return "fd";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "ts" || name == "TS") return Mode::term_sparsity;
    if (name == "ss" || name == "SS") return Mode::sign_symmetry;
    if (name == "fd" || name == "FD") return Mode::fully_dense;
    throw std::invalid_argument("unknown mode '" + name + "' (expected ts, ss or fd)");
}

void RelaxationConfig::validate(const DynamicalSystem& sys) const {
    if (d < 1) throw std::invalid_argument("relaxation order d must be positive");
    if (s < 1 || l < 1) throw std::invalid_argument("s and l must be at least 1");
    if (!(beta > 0.0)) throw std::invalid_argument("discount factor beta must be positive");
    if (d < sys.min_order())
        throw std::invalid_argument("relaxation order d=" + std::to_string(d) + " is below the minimum " +
                                    std::to_string(sys.min_order()) + " = max(ceil(d_f/2), ceil(d_p/2))");
}

std::size_t SupportChain::v_step(int s) const {
    if (g_graphs.empty()) throw std::logic_error("v chain is empty");
    const auto k = static_cast<std::size_t>(s);
    if (k <= g_graphs.size()) return k - 1;
    if (!stabilized_s) throw std::out_of_range("v chain was not iterated far enough");
    return g_graphs.size() - 1;
}

std::size_t SupportChain::w_step(int l) const {
    if (h_graphs.empty()) throw std::logic_error("w chain is empty");
    const auto k = static_cast<std::size_t>(l);
    if (k <= h_graphs.size()) return k - 1;
    if (!stabilized_l) throw std::out_of_range("w chain was not iterated far enough");
    return h_graphs.size() - 1;
}

SupportSet gram_basis(const DynamicalSystem& sys, int d, std::size_t j) {
    const int dj = sys.constraint_degree(j);
    return monomials_up_to(sys.dim(), d - (dj + 1) / 2);
}

SupportSet initial_support(const DynamicalSystem& sys, int d) {
    const std::size_t n = sys.dim();
    SupportSet base(n);
    for (const auto& p : sys.constraints) base.insert_all(support(p));
    std::vector<Exponent> doubled;
    for (const auto& a : monomials_up_to(n, d)) doubled.push_back(a.doubled());
    return base.united(generic_lie_support(base, sys)).united(SupportSet(n, std::move(doubled)));
}

namespace {

// edge {b, g} iff (b + g + supp(p_j)) meets `targets`
MonomialGraph translate_graph(const SupportSet& basis, const SupportSet& pj_support, const SupportSet& targets) {
    MonomialGraph g(basis);
    const auto& nodes = basis.elements();
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const Exponent sum = nodes[a] + nodes[b];
            for (const auto& delta : pj_support) {
                if (targets.contains(sum + delta)) {
                    g.add_edge(a, b);
                    break;
                }
            }
        }
    }
    return g;
}

std::vector<ChordalGraph> extend_all(const std::vector<MonomialGraph>& graphs, ChordalExtension kind) {
    std::vector<ChordalGraph> out;
    out.reserve(graphs.size());
    for (const auto& g : graphs) out.push_back(chordal_extension(g, kind));
    return out;
}

}  // namespace

MonomialGraph build_g_graph(const DynamicalSystem& sys, int d, const SupportSet& a_set, std::size_t j) {
    const SupportSet v_support = a_set.filtered_by_degree(2 * d + 1 - sys.field_degree());
    const SupportSet targets = a_set.united(generic_lie_support(v_support, sys));
    return translate_graph(gram_basis(sys, d, j), support(sys.constraint_with_unit(j)), targets);
}

MonomialGraph build_h_graph(const DynamicalSystem& sys, int d, const SupportSet& b_set, std::size_t j) {
    return translate_graph(gram_basis(sys, d, j), support(sys.constraint_with_unit(j)), b_set);
}

SupportChain iterate_v_chain(const DynamicalSystem& sys, int d, ChordalExtension extension, int s_max) {
    if (s_max < 1) throw std::invalid_argument("s_max must be at least 1");
    SupportChain chain;
    chain.a_sets.push_back(initial_support(sys, d));
    for (int s = 1; s <= s_max; ++s) {
        const SupportSet& current = chain.a_sets.back();
        const SupportSet v_support = current.filtered_by_degree(2 * d + 1 - sys.field_degree());
        const SupportSet targets = current.united(generic_lie_support(v_support, sys));
        std::vector<MonomialGraph> graphs;
        for (std::size_t j = 0; j <= sys.num_constraints(); ++j)
            graphs.push_back(translate_graph(gram_basis(sys, d, j), support(sys.constraint_with_unit(j)), targets));
        chain.g_graphs.push_back(extend_all(graphs, extension));
        // keeping the predecessor makes the chain ascending even when the
        // extension is not monotone or A^1 holds exponents of degree 2d + 1
        SupportSet next = current.united(supp_of_graph(chain.g_graphs.back()[0].graph));
        const bool fixed = next == current;
        chain.a_sets.push_back(std::move(next));
        if (fixed) {
            chain.stabilized_s = true;
            break;
        }
    }
    return chain;
}

void iterate_w_chain(SupportChain& chain, const DynamicalSystem& sys, int d, const SupportSet& a_set_s,
                     ChordalExtension extension, int l_max) {
    if (l_max < 1) throw std::invalid_argument("l_max must be at least 1");
    chain.b_sets.clear();
    chain.h_graphs.clear();
    chain.stabilized_l = false;
    chain.b_sets.push_back(a_set_s);
    for (int l = 1; l <= l_max; ++l) {
        const SupportSet& current = chain.b_sets.back();
        std::vector<MonomialGraph> graphs;
        for (std::size_t j = 0; j <= sys.num_constraints(); ++j) graphs.push_back(build_h_graph(sys, d, current, j));
        chain.h_graphs.push_back(extend_all(graphs, extension));
        SupportSet next = current;
        for (std::size_t j = 0; j <= sys.num_constraints(); ++j)
            next.insert_all(support(sys.constraint_with_unit(j)).minkowski(supp_of_graph(chain.h_graphs.back()[j].graph)));
        const bool fixed = next == current;
        chain.b_sets.push_back(std::move(next));
        if (fixed) {
            chain.stabilized_l = true;
            break;
        }
    }
}

namespace {

CliqueSet single_clique(std::size_t n) {
    CliqueSet cs;
    Clique c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    if (n > 0) cs.cliques.push_back(std::move(c));
    return cs;
}

CliqueSet as_clique_set(std::vector<std::vector<std::size_t>> blocks) {
    CliqueSet cs;
    cs.cliques = std::move(blocks);
    std::sort(cs.cliques.begin(), cs.cliques.end());
    return cs;
}

}  // namespace

BlockStructure block_structure(const DynamicalSystem& sys, const RelaxationConfig& config) {
    sys.validate();
    config.validate(sys);
    const std::size_t n = sys.dim();
    const int d = config.d;
    const int v_degree = 2 * d + 1 - sys.field_degree();
    BlockStructure bs;
    for (std::size_t j = 0; j <= sys.num_constraints(); ++j) {
        bs.a_layout.bases.push_back(gram_basis(sys, d, j));
        bs.bc_layout.bases.push_back(bs.a_layout.bases.back());
    }

    switch (config.mode) {
        case Mode::fully_dense: {
            bs.v_support = monomials_up_to(n, v_degree);
            bs.w_support = monomials_up_to(n, 2 * d);
            for (const auto& basis : bs.a_layout.bases) {
                bs.a_layout.cliques.push_back(single_clique(basis.size()));
                bs.bc_layout.cliques.push_back(single_clique(basis.size()));
            }
            break;
        }
        case Mode::sign_symmetry: {
            const auto group = sign_symmetries(sys, d);
            auto keep = [&](const SupportSet& all) {
                SupportSet out(n);
                for (const auto& a : all)
                    if (in_r_perp(group, a)) out.insert(a);
                return out;
            };
            bs.v_support = keep(monomials_up_to(n, v_degree));
            bs.w_support = keep(monomials_up_to(n, 2 * d));
            for (const auto& basis : bs.a_layout.bases) {
                bs.a_layout.cliques.push_back(as_clique_set(symmetry_blocks(group, basis)));
                bs.bc_layout.cliques.push_back(bs.a_layout.cliques.back());
            }
            bs.symmetry = group;
            break;
        }
        case Mode::term_sparsity: {
            SupportChain chain = iterate_v_chain(sys, d, config.extension, config.s);
            const std::size_t vs = chain.v_step(config.s);
            const SupportSet a_set = chain.a_sets[vs];
            iterate_w_chain(chain, sys, d, a_set, config.extension, config.l);
            const std::size_t ws = chain.w_step(config.l);
            bs.v_support = a_set.filtered_by_degree(v_degree);
            bs.w_support = chain.b_sets[ws];
            for (std::size_t j = 0; j <= sys.num_constraints(); ++j) {
                bs.a_layout.cliques.push_back(maximal_cliques(chain.g_graphs[vs][j]));
                bs.bc_layout.cliques.push_back(maximal_cliques(chain.h_graphs[ws][j]));
            }
            bs.chain = std::move(chain);
            break;
        }
    }
    return bs;
}

void write_chain(std::ostream& os, const SupportChain& chain, const std::vector<std::string>& variables) {
    auto dump = [&](const std::string& tag, const SupportSet& set) {
        os << tag << " (" << set.size() << "):";
        for (const auto& a : set) os << ' ' << to_string(a, variables);
        os << '\n';
    };
    for (std::size_t k = 0; k < chain.a_sets.size(); ++k) dump("A^" + std::to_string(k + 1), chain.a_sets[k]);
    os << "stabilized_s " << (chain.stabilized_s ? "yes" : "no") << '\n';
    for (std::size_t k = 0; k < chain.b_sets.size(); ++k) dump("B^" + std::to_string(k + 1), chain.b_sets[k]);
    if (!chain.b_sets.empty()) os << "stabilized_l " << (chain.stabilized_l ? "yes" : "no") << '\n';
}

}  // namespace tsdyn
