#include <doctest.h>

#include "oracles.hpp"
#include "tsdyn/problem_io.hpp"
#include "tsdyn/random_model.hpp"
#include "tsdyn/sparsity.hpp"
#include "tsdyn/symmetry.hpp"

using namespace tsdyn;

namespace {

const std::vector<std::string> xyz{"x1", "x2", "x3"};

DynamicalSystem load(const char* f) { return load_problem(oracle::data_file(f)).system; }

DynamicalSystem make(const std::vector<std::string>& vars, const std::vector<std::string>& f,
                     const std::vector<std::string>& p) {
    DynamicalSystem s;
    s.variables = vars;
    for (const auto& t : f) s.field.push_back(parse_polynomial(t, vars));
    for (const auto& t : p) s.constraints.push_back(parse_polynomial(t, vars));
    return s;
}

}  // namespace

TEST_CASE("GF(2) basis is canonical and spans the right group") {
    const SignSymmetryGroup g(4, {0b0110, 0b0011, 0b0101});
    CHECK(g.rank() == 2);
    CHECK(g.elements() == std::vector<std::uint64_t>{0b0000, 0b0011, 0b0101, 0b0110});
    CHECK(g == SignSymmetryGroup(4, {0b0101, 0b0110}));
    CHECK(g.contains(0b0110));
    CHECK_FALSE(g.contains(0b0001));

    // null space of a single row x1 + x2 over GF(2)^3
    const SignSymmetryGroup ns = gf2_null_space(3, {0b011});
    CHECK(ns.elements() == std::vector<std::uint64_t>{0b000, 0b011, 0b100, 0b111});
}

TEST_CASE("sign symmetries match definitional brute force on the bundled systems") {
    for (const char* f : {"lorenz.json", "cubic_a.json", "cubic_b.json", "lorenz_extended.json"}) {
        const DynamicalSystem sys = load(f);
        for (int d = sys.min_order(); d <= sys.min_order() + 1; ++d)
            CHECK(sign_symmetries(sys, d).elements() == oracle::brute_force_symmetries(sys));
    }
    const SignSymmetryGroup lor = sign_symmetries(load("lorenz.json"), 2);
    CHECK(lor == SignSymmetryGroup(3, {0b011}));
}

TEST_CASE("sign symmetries of small systems") {
    const auto odd = make(xyz, {"x1", "x2", "x3"}, {"1 - x1^2", "1 - x2^2", "1 - x3^2"});
    CHECK(sign_symmetries(odd, 1).rank() == 3);

    const auto shifted = make({"x1"}, {"x1 + 1"}, {"1 - x1^2"});
    CHECK(sign_symmetries(shifted, 1).rank() == 0);
    CHECK(oracle::brute_force_symmetries(shifted) == std::vector<std::uint64_t>{0});
}

TEST_CASE("sign symmetries of random models match brute force") {
    for (std::size_t n : {5u, 6u, 7u, 8u, 10u}) {
        const RandomModel rm = random_model(n, 100 + n);
        CHECK(sign_symmetries(rm.problem.system, 2).elements() == oracle::brute_force_symmetries(rm.problem.system));
    }
}

TEST_CASE("membership in the orthogonal complement") {
    const SignSymmetryGroup trivial(3, {});
    CHECK(in_r_perp(trivial, Exponent{1, 0, 0}));
    const SignSymmetryGroup lor(3, {0b011});
    CHECK(in_r_perp(lor, Exponent{1, 1, 0}));
    CHECK(in_r_perp(lor, Exponent{0, 0, 1}));
    CHECK_FALSE(in_r_perp(lor, Exponent{1, 0, 0}));
    const SignSymmetryGroup full(3, {0b001, 0b010, 0b100});
    for (const auto& b : monomials_up_to(3, 3)) CHECK(in_r_perp(full, b.doubled()));
}

TEST_CASE("symmetry blocks") {
    const SupportSet basis = monomials_up_to(3, 2);
    CHECK(symmetry_blocks(SignSymmetryGroup(3, {}), basis).size() == 1);

    const auto blocks = symmetry_blocks(SignSymmetryGroup(3, {0b011}), basis);
    REQUIRE(blocks.size() == 2);
    auto names = [&](const std::vector<std::size_t>& idx) {
        SupportSet s(3);
        for (auto i : idx) s.insert(basis.elements()[i]);
        return s;
    };
    CHECK(names(blocks[0]) == oracle::monomials(xyz, {"1", "x3", "x1^2", "x2^2", "x3^2", "x1*x2"}));
    CHECK(names(blocks[1]) == oracle::monomials(xyz, {"x1", "x2", "x1*x3", "x2*x3"}));

    // equivalence-relation partition: disjoint and covering
    std::vector<int> seen(basis.size(), 0);
    for (const auto& b : blocks)
        for (auto i : b) ++seen[i];
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("clique partition versus symmetry blocks for the Lorenz system") {
    const DynamicalSystem sys = load("lorenz.json");
    const SignSymmetryGroup g = sign_symmetries(sys, 2);
    const SupportChain chain = iterate_v_chain(sys, 2, ChordalExtension::maximal, 5);
    const auto blocks = symmetry_blocks(g, gram_basis(sys, 2, 0));
    CHECK(blocks_equal(maximal_cliques(chain.g_graphs[1][0]), blocks));

    // the raw first graph is not yet a union of complete blocks
    const MonomialGraph raw = build_g_graph(sys, 2, chain.a_sets[0], 0);
    CHECK_FALSE(blocks_equal(CliqueSet{oracle::brute_force_cliques(raw)}, blocks));

    const CliqueSet same = maximal_cliques(chain.g_graphs[1][0]);
    CHECK(blocks_equal(same, same.cliques));
}

// From order 2 on; at order 1 the v side of the Lorenz system only admits a
// constant v, so 1 and x3 never meet and the term-sparsity blocks stay finer.
TEST_CASE("at stabilization with maximal extensions the cliques are the symmetry blocks") {
    for (const char* f : {"lorenz.json", "cubic_a.json", "cubic_b.json", "lorenz_extended.json"}) {
        const DynamicalSystem sys = load(f);
        const int d_max = sys.dim() > 3 ? 2 : 3;
        for (int d = std::max(2, sys.min_order()); d <= d_max; ++d) {
            const SignSymmetryGroup g = sign_symmetries(sys, d);
            SupportChain chain = iterate_v_chain(sys, d, ChordalExtension::maximal, 10);
            REQUIRE(chain.stabilized_s);
            iterate_w_chain(chain, sys, d, chain.a_sets.back(), ChordalExtension::maximal, 10);
            REQUIRE(chain.stabilized_l);
            for (std::size_t j = 0; j <= sys.num_constraints(); ++j) {
                const auto blocks = symmetry_blocks(g, gram_basis(sys, d, j));
                const std::string where = std::string(f) + " d=" + std::to_string(d) + " j=" + std::to_string(j);
                CHECK_MESSAGE(blocks_equal(maximal_cliques(chain.g_graphs.back()[j]), blocks), where);
                CHECK_MESSAGE(blocks_equal(maximal_cliques(chain.h_graphs.back()[j]), blocks), where);
            }
        }
    }
}
