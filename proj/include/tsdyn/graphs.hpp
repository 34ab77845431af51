#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tsdyn/poly.hpp"

namespace tsdyn {

// Undirected graph whose nodes are monomials (exponents), kept in graded-lex
// order. Adjacency is stored as a dense symmetric matrix; node counts here are
// at most a few hundred.
class MonomialGraph {
public:
    MonomialGraph() = default;
    explicit MonomialGraph(SupportSet nodes);

    std::size_t num_nodes() const { return nodes_.size(); }
    const SupportSet& node_set() const { return nodes_; }
    const Exponent& node(std::size_t i) const { return nodes_.elements()[i]; }

    bool has_edge(std::size_t i, std::size_t j) const { return adj_[i * nodes_.size() + j] != 0; }
    void add_edge(std::size_t i, std::size_t j);
    std::size_t num_edges() const { return num_edges_; }
    std::size_t degree(std::size_t i) const;
    std::vector<std::size_t> neighbors(std::size_t i) const;
    // all edges as (i, j) with i < j, sorted
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    bool is_complete() const;
    // same node set and edges(this) subset of edges(other)
    bool is_subgraph_of(const MonomialGraph& other) const;

    bool operator==(const MonomialGraph& other) const = default;

private:
    SupportSet nodes_;
    std::vector<std::uint8_t> adj_;
    std::size_t num_edges_ = 0;
};

// A chordal graph together with a perfect elimination ordering:
// elimination_order[k] is the node eliminated at step k.
struct ChordalGraph {
    MonomialGraph graph;
    std::vector<std::size_t> elimination_order;
};

using Clique = std::vector<std::size_t>;  // sorted node indices

struct CliqueSet {
    std::vector<Clique> cliques;  // sorted lexicographically

    std::size_t size() const { return cliques.size(); }
    std::vector<std::size_t> sizes_sorted() const;  // largest first
};

enum class ChordalExtension { maximal, min_degree };

std::string to_string(ChordalExtension e);
ChordalExtension parse_extension(const std::string& name);

// {2b : b in nodes} U {b + g : {b, g} in edges}
SupportSet supp_of_graph(const MonomialGraph& g);

// completes every connected component
ChordalGraph maximal_chordal_extension(const MonomialGraph& g);

// greedy minimum-degree elimination with fill-in; ties go to the smallest node
// index
ChordalGraph approx_smallest_chordal_extension(const MonomialGraph& g);

ChordalGraph chordal_extension(const MonomialGraph& g, ChordalExtension kind);

// connected components as sorted index lists, ordered by smallest member
std::vector<std::vector<std::size_t>> connected_components(const MonomialGraph& g);

// Throws std::invalid_argument if the elimination order is not a perfect
// elimination ordering of the graph.
CliqueSet maximal_cliques(const ChordalGraph& cg);

bool is_perfect_elimination_order(const MonomialGraph& g, const std::vector<std::size_t>& order);

// one "monomial monomial" pair per line
void write_edge_list(std::ostream& os, const MonomialGraph& g, const std::vector<std::string>& variables);

}  // namespace tsdyn
