#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tsdyn/poly.hpp"

using namespace tsdyn;

namespace {

const std::vector<std::string> xyz{"x1", "x2", "x3"};

Polynomial lorenz_f(int i) {
    static const char* f[] = {"10*(x2 - x1)", "x1*(28 - x3) - x2", "x1*x2 - 8/3*x3"};
    return parse_polynomial(f[i], xyz);
}

DynamicalSystem lorenz() {
    DynamicalSystem s;
    s.variables = xyz;
    for (int i = 0; i < 3; ++i) s.field.push_back(lorenz_f(i));
    for (const char* p : {"1 - x1^2", "1 - x2^2", "1 - x3^2"}) s.constraints.push_back(parse_polynomial(p, xyz));
    return s;
}

Polynomial random_poly(std::mt19937_64& rng, std::size_t dim, int max_deg, int terms) {
    std::uniform_int_distribution<int> e(0, max_deg);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    Polynomial p(dim);
    for (int t = 0; t < terms; ++t) {
        Exponent a(dim);
        for (std::size_t i = 0; i < dim; ++i) a.set(i, e(rng));
        p.add_term(a, c(rng));
    }
    return p;
}

// Horner-free reference: sum of c * prod x_i^a_i with std::pow.
double naive_eval(const Polynomial& p, const std::vector<double>& x) {
    double s = 0.0;
    for (const auto& [a, c] : p.terms()) {
        double t = c;
        for (std::size_t i = 0; i < x.size(); ++i) t *= std::pow(x[i], a[i]);
        s += t;
    }
    return s;
}

}  // namespace

TEST_CASE("exponents order graded-lexicographically") {
    const SupportSet s = monomials_up_to(2, 2);
    REQUIRE(s.size() == 6);
    const std::vector<Exponent> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(s.elements() == want);
    CHECK(Exponent({1, 2, 0}).degree() == 3);
    CHECK(Exponent({1, 2, 3}).parity_mask() == 0b101u);
}

TEST_CASE("parse_polynomial reads terms, products and rational constants") {
    const Polynomial p = parse_polynomial("10*x2 - 10*x1", xyz);
    CHECK(p.num_terms() == 2);
    CHECK(p.coefficient(Exponent{0, 1, 0}) == 10.0);
    CHECK(p.coefficient(Exponent{1, 0, 0}) == -10.0);

    CHECK(parse_polynomial("x1^2 - x1^2", xyz).is_zero());

    const Polynomial q = parse_polynomial("x1*x2 - 8/3*x3", xyz);
    CHECK(q.num_terms() == 2);
    CHECK(q.coefficient(Exponent{1, 1, 0}) == 1.0);
    CHECK(q.coefficient(Exponent{0, 0, 1}) == doctest::Approx(-8.0 / 3.0).epsilon(1e-15));

    CHECK(parse_polynomial("(x1 + 1)^2", xyz) == parse_polynomial("x1^2 + 2*x1 + 1", xyz));
}

TEST_CASE("parse_polynomial reports errors with a position") {
    CHECK_THROWS_AS(parse_polynomial("x1 + y", xyz), ParseError);
    try {
        parse_polynomial("x1 + * x2", xyz);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
    CHECK_THROWS_AS(parse_polynomial("x1^", xyz), ParseError);
    CHECK_THROWS_AS(parse_polynomial("(x1 + x2", xyz), ParseError);
}

TEST_CASE("print and parse round-trip") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const Polynomial p = random_poly(rng, 3, 4, 6);
        const Polynomial q = parse_polynomial(to_string(p, xyz), xyz);
        REQUIRE(q.num_terms() == p.num_terms());
        for (const auto& [a, c] : p.terms()) CHECK(q.coefficient(a) == doctest::Approx(c).epsilon(1e-15));
    }
    CHECK(to_string(Polynomial(3), xyz) == "0");
}

TEST_CASE("support") {
    CHECK(support(Polynomial(3)).empty());
    CHECK(support(parse_polynomial("1 - x1^2", xyz)) == oracle::monomials(xyz, {"1", "x1^2"}));
    CHECK(support(lorenz_f(1)) == oracle::monomials(xyz, {"x1", "x1*x3", "x2"}));
}

TEST_CASE("generic Lie support") {
    const DynamicalSystem sys = lorenz();
    CHECK(generic_lie_support(oracle::monomials(xyz, {"1"}), sys).empty());
    CHECK(generic_lie_support(oracle::monomials(xyz, {"x1^2"}), sys) == oracle::monomials(xyz, {"x1*x2", "x1^2"}));

    // v supported on {1} and the constraint supports gives the degree-3/4 part
    // of the initial support of the Lorenz example
    const SupportSet v = oracle::monomials(xyz, {"1", "x1^2", "x2^2", "x3^2"});
    const SupportSet lie = generic_lie_support(v, sys);
    CHECK(lie == oracle::monomials(xyz, {"x1^2", "x1*x2", "x2^2", "x1*x2*x3", "x3^2"}));
}

TEST_CASE("Lie polynomial") {
    const DynamicalSystem sys = lorenz();
    CHECK(lie_polynomial(Polynomial::constant(3, 1.0), sys, 1.0) == Polynomial::constant(3, 1.0));

    const Polynomial got = lie_polynomial(Polynomial::variable(3, 2), sys, 1.0);
    CHECK(got.num_terms() == 2);
    CHECK(got.coefficient(Exponent{1, 1, 0}) == -1.0);
    CHECK(got.coefficient(Exponent{0, 0, 1}) == doctest::Approx(1.0 + 8.0 / 3.0).epsilon(1e-15));

    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const Polynomial v = random_poly(rng, 3, 3, 5);
        const SupportSet bound = support(v).united(generic_lie_support(support(v), sys));
        CHECK(support(lie_polynomial(v, sys, 0.7)).is_subset_of(bound));
    }
}

TEST_CASE("evaluation agrees with a naive reference and is additive") {
    CHECK(parse_polynomial("1 - x1^2", xyz).eval(std::vector<double>{0, 0, 0}) == 1.0);
    CHECK(parse_polynomial("x1*x2*x3", xyz).eval(std::vector<double>{2, 3, 4}) == 24.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        const Polynomial p = random_poly(rng, 3, 5, 8);
        const Polynomial q = random_poly(rng, 3, 5, 8);
        const std::vector<double> x{u(rng), u(rng), u(rng)};
        const double ref = naive_eval(p, x);
        CHECK(p.eval(x) == doctest::Approx(ref).epsilon(1e-12));
        CHECK((p + q).eval(x) == doctest::Approx(ref + naive_eval(q, x)).epsilon(1e-12));
    }
}

TEST_CASE("product support lies in the Minkowski sum, with equality for generic coefficients") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const Polynomial p = random_poly(rng, 3, 3, 4);
        const Polynomial q = random_poly(rng, 3, 3, 4);
        const SupportSet mink = support(p).minkowski(support(q));
        const SupportSet prod = support(p * q);
        CHECK(prod.is_subset_of(mink));
        // random real coefficients cancel with probability zero
        CHECK(prod == mink);
    }
}

TEST_CASE("generic Lie support is monotone") {
    const DynamicalSystem sys = lorenz();
    std::mt19937_64 rng(9);
    const SupportSet all = monomials_up_to(3, 4);
    std::bernoulli_distribution coin(0.3);
    for (int t = 0; t < 30; ++t) {
        SupportSet small(3), big(3);
        for (const auto& a : all) {
            if (coin(rng)) small.insert(a);
            if (coin(rng)) big.insert(a);
        }
        big.insert_all(small);
        CHECK(generic_lie_support(small, sys).is_subset_of(generic_lie_support(big, sys)));
    }
}

TEST_CASE("system degrees and minimum order") {
    const DynamicalSystem sys = lorenz();
    CHECK(sys.field_degree() == 2);
    CHECK(sys.constraint_degree(0) == 0);
    CHECK(sys.constraint_degree(1) == 2);
    CHECK(sys.max_constraint_degree() == 2);
    CHECK(sys.min_order() == 1);
    CHECK_NOTHROW(sys.validate());

    DynamicalSystem bad = sys;
    bad.constraints.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
