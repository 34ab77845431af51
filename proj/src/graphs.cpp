#include "tsdyn/graphs.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace tsdyn {

MonomialGraph::MonomialGraph(SupportSet nodes) : nodes_(std::move(nodes)), adj_(nodes_.size() * nodes_.size(), 0) {}

void MonomialGraph::add_edge(std::size_t i, std::size_t j) {
    const std::size_t n = nodes_.size();
    if (i >= n || j >= n) throw std::out_of_range("edge index out of range");
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    if (adj_[i * n + j]) return;
    adj_[i * n + j] = adj_[j * n + i] = 1;
    ++num_edges_;
}

std::size_t MonomialGraph::degree(std::size_t i) const {
    const std::size_t n = nodes_.size();
    return static_cast<std::size_t>(std::count(adj_.begin() + i * n, adj_.begin() + (i + 1) * n, 1));
}

std::vector<std::size_t> MonomialGraph::neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        if (has_edge(i, j)) out.push_back(j);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> MonomialGraph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(num_edges_);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (std::size_t j = i + 1; j < nodes_.size(); ++j)
            if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
}

bool MonomialGraph::is_complete() const {
    const std::size_t n = nodes_.size();
    return num_edges_ == n * (n - (n > 0 ? 1 : 0)) / 2;
}

bool MonomialGraph::is_subgraph_of(const MonomialGraph& other) const {
    if (nodes_ != other.nodes_) return false;
    for (std::size_t k = 0; k < adj_.size(); ++k)
        if (adj_[k] && !other.adj_[k]) return false;
    return true;
}

std::vector<std::size_t> CliqueSet::sizes_sorted() const {
    std::vector<std::size_t> s;
    for (const auto& c : cliques) s.push_back(c.size());
    std::sort(s.rbegin(), s.rend());
    return s;
}

std::string to_string(ChordalExtension e) {
    return e == ChordalExtension::maximal ? "maximal" : "min-degree";
}

ChordalExtension parse_extension(const std::string& name) {
    if (name == "maximal") return ChordalExtension::maximal;
    if (name == "min-degree" || name == "min_degree" || name == "approx_smallest") return ChordalExtension::min_degree;
    throw std::invalid_argument("unknown chordal extension '" + name + "'");
}

SupportSet supp_of_graph(const MonomialGraph& g) {
    std::vector<Exponent> out;
    out.reserve(g.num_nodes() + g.num_edges());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) out.push_back(g.node(i).doubled());
    for (auto [i, j] : g.edges()) out.push_back(g.node(i) + g.node(j));
    return SupportSet(g.node_set().dim(), std::move(out));
}

std::vector<std::vector<std::size_t>> connected_components(const MonomialGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<long> comp(n, -1);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::size_t> members{s};
        comp[s] = static_cast<long>(out.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (std::size_t t = 0; t < n; ++t) {
                if (comp[t] < 0 && g.has_edge(members[k], t)) {
                    comp[t] = comp[s];
                    members.push_back(t);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

ChordalGraph maximal_chordal_extension(const MonomialGraph& g) {
    ChordalGraph cg{g, {}};
    for (const auto& comp : connected_components(g))
        for (std::size_t a = 0; a < comp.size(); ++a)
            for (std::size_t b = a + 1; b < comp.size(); ++b) cg.graph.add_edge(comp[a], comp[b]);
    cg.elimination_order.resize(g.num_nodes());
    std::iota(cg.elimination_order.begin(), cg.elimination_order.end(), std::size_t{0});
    return cg;
}

ChordalGraph approx_smallest_chordal_extension(const MonomialGraph& g) {
    const std::size_t n = g.num_nodes();
    ChordalGraph cg{g, {}};
    std::vector<bool> eliminated(n, false);
    cg.elimination_order.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        std::size_t best_deg = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (eliminated[v]) continue;
            std::size_t deg = 0;
            for (std::size_t u = 0; u < n; ++u)
                if (!eliminated[u] && cg.graph.has_edge(v, u)) ++deg;
            if (best == n || deg < best_deg) {
                best = v;
                best_deg = deg;
            }
        }
        std::vector<std::size_t> nb;
        for (std::size_t u = 0; u < n; ++u)
            if (!eliminated[u] && cg.graph.has_edge(best, u)) nb.push_back(u);
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b) cg.graph.add_edge(nb[a], nb[b]);
        eliminated[best] = true;
        cg.elimination_order.push_back(best);
    }
    return cg;
}

ChordalGraph chordal_extension(const MonomialGraph& g, ChordalExtension kind) {
    return kind == ChordalExtension::maximal ? maximal_chordal_extension(g) : approx_smallest_chordal_extension(g);
}

namespace {

// candidate clique of each node: itself plus its later-eliminated neighbours
std::vector<Clique> elimination_candidates(const MonomialGraph& g, const std::vector<std::size_t>& order) {
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> position(n);
    for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
    std::vector<Clique> cand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t v = order[k];
        Clique c{v};
        for (std::size_t u = 0; u < n; ++u)
            if (g.has_edge(v, u) && position[u] > k) c.push_back(u);
        std::sort(c.begin(), c.end());
        cand[k] = std::move(c);
    }
    return cand;
}

bool is_clique(const MonomialGraph& g, const Clique& c) {
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b)
            if (!g.has_edge(c[a], c[b])) return false;
    return true;
}

bool valid_order(std::size_t n, const std::vector<std::size_t>& order) {
    if (order.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (auto v : order) {
        if (v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

}  // namespace

bool is_perfect_elimination_order(const MonomialGraph& g, const std::vector<std::size_t>& order) {
    if (!valid_order(g.num_nodes(), order)) return false;
    for (const auto& c : elimination_candidates(g, order))
        if (!is_clique(g, c)) return false;
    return true;
}

CliqueSet maximal_cliques(const ChordalGraph& cg) {
    const auto& g = cg.graph;
    if (!valid_order(g.num_nodes(), cg.elimination_order))
        throw std::invalid_argument("elimination order is not a permutation of the nodes");
    auto cand = elimination_candidates(g, cg.elimination_order);
    for (const auto& c : cand)
        if (!is_clique(g, c)) throw std::invalid_argument("elimination order is not a perfect elimination ordering");
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    CliqueSet out;
    for (std::size_t a = 0; a < cand.size(); ++a) {
        bool contained = false;
        for (std::size_t b = 0; b < cand.size() && !contained; ++b) {
            if (a == b || cand[b].size() <= cand[a].size()) continue;
            contained = std::includes(cand[b].begin(), cand[b].end(), cand[a].begin(), cand[a].end());
        }
        if (!contained) out.cliques.push_back(cand[a]);
    }
    return out;
}

void write_edge_list(std::ostream& os, const MonomialGraph& g, const std::vector<std::string>& variables) {
    for (auto [i, j] : g.edges()) os << to_string(g.node(i), variables) << ' ' << to_string(g.node(j), variables) << '\n';
}

}  // namespace tsdyn
