#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tsdyn/graphs.hpp"

using namespace tsdyn;

namespace {

MonomialGraph path(std::size_t n) {
    MonomialGraph g(monomials_up_to(1, static_cast<int>(n) - 1));
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

MonomialGraph cycle(std::size_t n) {
    MonomialGraph g = path(n);
    g.add_edge(0, n - 1);
    return g;
}

MonomialGraph complete(std::size_t n) {
    MonomialGraph g(monomials_up_to(1, static_cast<int>(n) - 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

std::vector<std::vector<std::size_t>> as_vectors(const CliqueSet& c) { return c.cliques; }

}  // namespace

TEST_CASE("supp of a graph") {
    const std::vector<std::string> xy{"x1", "x2"};
    MonomialGraph edgeless(oracle::monomials(xy, {"1", "x1"}));
    CHECK(supp_of_graph(edgeless) == oracle::monomials(xy, {"1", "x1^2"}));

    MonomialGraph k3(oracle::monomials(xy, {"1", "x1", "x2"}));
    k3.add_edge(0, 1);
    k3.add_edge(0, 2);
    k3.add_edge(1, 2);
    CHECK(supp_of_graph(k3) == oracle::monomials(xy, {"1", "x1^2", "x2^2", "x1", "x2", "x1*x2"}));
}

TEST_CASE("maximal chordal extension completes components") {
    const auto k5 = complete(5);
    CHECK(maximal_chordal_extension(k5).graph == k5);

    const auto tri = maximal_chordal_extension(path(3));
    CHECK(tri.graph == complete(3));

    MonomialGraph two(monomials_up_to(1, 4));
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    two.add_edge(3, 4);
    const auto ext = maximal_chordal_extension(two);
    CHECK(ext.graph.num_edges() == 1 + 3);
    CHECK(maximal_cliques(ext).sizes_sorted() == std::vector<std::size_t>{3, 2});
}

TEST_CASE("minimum-degree extension") {
    // trees are chordal: no fill
    CHECK(approx_smallest_chordal_extension(path(6)).graph == path(6));
    const auto c4 = approx_smallest_chordal_extension(cycle(4));
    CHECK(c4.graph.num_edges() == 5);
    CHECK(cycle(4).is_subgraph_of(c4.graph));

    // chordal input is left alone
    MonomialGraph fan = path(5);
    for (std::size_t i = 2; i < 5; ++i) fan.add_edge(0, i);
    REQUIRE_FALSE(oracle::has_chordless_cycle(fan));
    CHECK(approx_smallest_chordal_extension(fan).graph == fan);
}

TEST_CASE("extensions are chordal supergraphs with perfect elimination orders") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 3 + t % 8;
        const MonomialGraph g = oracle::random_graph(n, 0.15 + 0.05 * (t % 10), rng);
        const ChordalGraph mx = maximal_chordal_extension(g);
        const ChordalGraph md = approx_smallest_chordal_extension(g);
        for (const ChordalGraph* cg : {&mx, &md}) {
            CHECK(g.is_subgraph_of(cg->graph));
            CHECK_FALSE(oracle::has_chordless_cycle(cg->graph));
            CHECK(is_perfect_elimination_order(cg->graph, cg->elimination_order));
            CHECK(as_vectors(maximal_cliques(*cg)) == oracle::brute_force_cliques(cg->graph));
        }
        CHECK(md.graph.is_subgraph_of(mx.graph));
    }
}

TEST_CASE("maximal extension is monotone in the edge set") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 4 + t % 7;
        const MonomialGraph g1 = oracle::random_graph(n, 0.2, rng);
        MonomialGraph g2 = g1;
        const MonomialGraph extra = oracle::random_graph(n, 0.1, rng);
        for (auto [i, j] : extra.edges()) g2.add_edge(i, j);
        CHECK(maximal_chordal_extension(g1).graph.is_subgraph_of(maximal_chordal_extension(g2).graph));
        CHECK(supp_of_graph(g1).is_subset_of(supp_of_graph(g2)));
    }
}

TEST_CASE("minimum-degree extension regression on fixed seeds") {
    // frozen outputs of the greedy heuristic; edges(g) <= edges(ext) always holds,
    // monotonicity under edge addition is only heuristic for this extension
    std::mt19937_64 rng(31337);
    std::vector<std::size_t> fills;
    for (int t = 0; t < 6; ++t) {
        const MonomialGraph g = oracle::random_graph(9, 0.35, rng);
        fills.push_back(approx_smallest_chordal_extension(g).graph.num_edges() - g.num_edges());
    }
    const auto again = [&] {
        std::mt19937_64 r2(31337);
        std::vector<std::size_t> f;
        for (int t = 0; t < 6; ++t) {
            const MonomialGraph g = oracle::random_graph(9, 0.35, r2);
            f.push_back(approx_smallest_chordal_extension(g).graph.num_edges() - g.num_edges());
        }
        return f;
    }();
    CHECK(fills == again);
}

TEST_CASE("clique extraction edge cases") {
    CHECK(maximal_cliques(maximal_chordal_extension(complete(4))).sizes_sorted() == std::vector<std::size_t>{4});
    MonomialGraph empty(monomials_up_to(1, 3));
    const auto singles = maximal_cliques(maximal_chordal_extension(empty));
    CHECK(singles.size() == 4);
    CHECK(singles.sizes_sorted() == std::vector<std::size_t>{1, 1, 1, 1});

    ChordalGraph bad{cycle(4), {0, 1, 2, 3}};
    CHECK_FALSE(is_perfect_elimination_order(bad.graph, bad.elimination_order));
    CHECK_THROWS_AS(maximal_cliques(bad), std::invalid_argument);
}

TEST_CASE("connected components and edge-list dump") {
    MonomialGraph g(monomials_up_to(1, 4));
    g.add_edge(3, 4);
    g.add_edge(0, 2);
    const auto comps = connected_components(g);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<std::size_t>{0, 2});
    CHECK(comps[1] == std::vector<std::size_t>{1});
    CHECK(comps[2] == std::vector<std::size_t>{3, 4});

    std::ostringstream os;
    write_edge_list(os, g, {"x"});
    CHECK(os.str() == "1 x^2\nx^3 x^4\n");
}
