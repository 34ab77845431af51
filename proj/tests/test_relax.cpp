#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tsdyn/problem_io.hpp"
#include "tsdyn/relax.hpp"
#include "tsdyn/sdp.hpp"

using namespace tsdyn;

namespace {

ProblemFile load(const char* f) { return load_problem(oracle::data_file(f)); }

RelaxationConfig cfg(int d, Mode mode, int s = 1, int l = 1) {
    RelaxationConfig c;
    c.d = d;
    c.mode = mode;
    c.s = s;
    c.l = l;
    return c;
}

// Block sizes of one family and constraint index, largest first.
std::vector<std::size_t> family_sizes(const Relaxation& r, Certificate fam, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < r.origins.size(); ++k)
        if (r.origins[k].family == fam && r.origins[k].j == j) out.push_back(r.problem.psd_blocks[k].dim);
    std::sort(out.rbegin(), out.rend());
    return out;
}

}  // namespace

TEST_CASE("box moments") {
    const Box cube = Box::cube(3);
    CHECK(box_moment(Exponent{0, 0, 0}, cube) == 8.0);
    CHECK(box_moment(Exponent{2, 0, 0}, cube) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(box_moment(Exponent{1, 0, 0}, cube) == 0.0);
    CHECK(cube.volume() == 8.0);

    // against midpoint quadrature on a skewed box
    const Box b{{0.0, -1.0}, {2.0, 0.5}};
    const Exponent a{3, 2};
    const int N = 400;
    double q = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double x = b.lo[0] + (i + 0.5) * (b.hi[0] - b.lo[0]) / N;
            const double y = b.lo[1] + (j + 0.5) * (b.hi[1] - b.lo[1]) / N;
            q += std::pow(x, 3) * y * y;
        }
    q *= (b.hi[0] - b.lo[0]) * (b.hi[1] - b.lo[1]) / (N * N);
    CHECK(box_moment(a, b) == doctest::Approx(q).epsilon(1e-4));

    Box bad{{0.0}, {0.0}};
    CHECK_THROWS_AS(bad.validate(1), std::invalid_argument);
}

TEST_CASE("assembled problems reference only declared blocks and keep the objective on w") {
    const ProblemFile pf = load("lorenz.json");
    for (Mode m : {Mode::term_sparsity, Mode::sign_symmetry, Mode::fully_dense}) {
        const Relaxation r = assemble(pf.system, pf.box, cfg(2, m));
        CHECK_NOTHROW(r.problem.validate());
        CHECK(r.origins.size() == r.problem.num_blocks());
        CHECK(r.problem.objective_entries.empty());
        const std::size_t nv = r.v_exponents.size();
        REQUIRE(r.problem.objective_free.size() == r.problem.num_free());
        for (std::size_t i = 0; i < nv; ++i) CHECK(r.problem.objective_free[i] == 0.0);
        for (std::size_t i = 0; i < r.w_exponents.size(); ++i)
            CHECK(r.problem.objective_free[nv + i] == box_moment(r.w_exponents[i], pf.box));
        for (const auto& e : r.problem.equalities)
            for (const auto& x : e.entries) CHECK(x.row < r.origins[x.block].monomials.size());
    }
}

TEST_CASE("block layout of the Lorenz relaxation") {
    const ProblemFile pf = load("lorenz.json");
    const Relaxation ts2 = assemble(pf.system, pf.box, cfg(2, Mode::term_sparsity, 2));
    CHECK(family_sizes(ts2, Certificate::a, 0) == std::vector<std::size_t>{6, 4});

    const Relaxation fd = assemble(pf.system, pf.box, cfg(2, Mode::fully_dense));
    CHECK(family_sizes(fd, Certificate::a, 0) == std::vector<std::size_t>{10});
    CHECK(family_sizes(fd, Certificate::b, 1) == std::vector<std::size_t>{4});
}

TEST_CASE("dense a0 block of the five-variable system at order four") {
    const ProblemFile pf = load("lorenz_extended.json");
    const Relaxation fd = assemble(pf.system, pf.box, cfg(4, Mode::fully_dense));
    CHECK(family_sizes(fd, Certificate::a, 0) == std::vector<std::size_t>{126});
}

TEST_CASE("sign symmetry mode with a trivial group reduces to the dense relaxation") {
    const std::vector<std::string> xy{"x1", "x2"};
    DynamicalSystem sys;
    sys.variables = xy;
    sys.field = {parse_polynomial("x1 + x2 + 1", xy), parse_polynomial("x1*x2 + x2^2 + x1 + 1", xy)};
    sys.constraints = {parse_polynomial("1 - x1^2", xy), parse_polynomial("1 - x2^2", xy)};
    const Box box = Box::cube(2);
    for (int d = 2; d <= 3; ++d) {
        const Relaxation ss = assemble(sys, box, cfg(d, Mode::sign_symmetry));
        const Relaxation fd = assemble(sys, box, cfg(d, Mode::fully_dense));
        CHECK(problem_digest(ss.problem) == problem_digest(fd.problem));
        // first graph complete: once the chains reach their fixed point term
        // sparsity has nothing left to remove
        const Relaxation ts = assemble(sys, box, cfg(d, Mode::term_sparsity, 2, 2));
        CHECK(problem_digest(ts.problem) == problem_digest(fd.problem));
    }
}

TEST_CASE("term sparsity never adds Gram variables") {
    for (const char* f : {"lorenz.json", "cubic_a.json", "cubic_b.json"}) {
        const ProblemFile pf = load(f);
        for (int d = pf.system.min_order(); d <= 3; ++d) {
            const Relaxation ts = assemble(pf.system, pf.box, cfg(d, Mode::term_sparsity));
            const Relaxation fd = assemble(pf.system, pf.box, cfg(d, Mode::fully_dense));
            const bool incomplete = !build_g_graph(pf.system, d, initial_support(pf.system, d), 0).is_complete();
            if (incomplete)
                CHECK(ts.problem.num_gram_scalars() < fd.problem.num_gram_scalars());
            else
                CHECK(ts.problem.num_gram_scalars() <= fd.problem.num_gram_scalars());
        }
    }
}

TEST_CASE("orders below the minimum are rejected") {
    const ProblemFile pf = load("cubic_a.json");
    CHECK_THROWS_AS(assemble(pf.system, pf.box, cfg(1, Mode::fully_dense)), std::invalid_argument);
}

TEST_CASE("recovering a hand-built feasible point") {
    // v = 0, w = 1, b0 = 1, everything else zero
    const ProblemFile pf = load("lorenz.json");
    for (double beta : {1.0, 0.3}) {
        RelaxationConfig c = cfg(2, Mode::term_sparsity);
        c.beta = beta;
        const Relaxation r = assemble(pf.system, pf.box, c);
        BlockMatrices X;
        for (const auto& b : r.problem.psd_blocks)
            X.push_back(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b.dim), static_cast<Eigen::Index>(b.dim)));
        bool placed = false;
        for (std::size_t k = 0; k < r.origins.size() && !placed; ++k) {
            const auto& o = r.origins[k];
            if (o.family != Certificate::b || o.j != 0) continue;
            for (std::size_t i = 0; i < o.monomials.size(); ++i)
                if (o.monomials[i].degree() == 0) {
                    X[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
                    placed = true;
                }
        }
        REQUIRE(placed);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r.problem.num_free()));
        const std::size_t nv = r.v_exponents.size();
        bool w0 = false;
        for (std::size_t i = 0; i < r.w_exponents.size(); ++i)
            if (r.w_exponents[i].degree() == 0) {
                x[static_cast<Eigen::Index>(nv + i)] = 1.0;
                w0 = true;
            }
        REQUIRE(w0);
        const CertificateSet cs = recover(r, X, x);
        CHECK(cs.max_residual == 0.0);
        CHECK(cs.residual_ok);
        CHECK(cs.objective == 8.0);
        CHECK(cs.w == Polynomial::constant(3, 1.0));
        CHECK(cs.v.is_zero());
        const Eigen::VectorXd lhs = apply_constraints(r.problem, X, x);
        for (std::size_t i = 0; i < r.problem.num_equalities(); ++i)
            CHECK(lhs[static_cast<Eigen::Index>(i)] == r.problem.equalities[i].rhs);
        CHECK(primal_objective(r.problem, X, x) == 8.0);
    }
}

TEST_CASE("recovered certificate of a solved relaxation") {
    const ProblemFile pf = load("lorenz.json");
    const Relaxation r = assemble(pf.system, pf.box, cfg(2, Mode::term_sparsity, 2));
    const SdpSolution s = solve(r.problem);
    REQUIRE(s.status == SolveStatus::optimal);
    const CertificateSet cs = recover(r, s);
    CHECK(cs.residual_ok);
    CHECK(cs.objective == doctest::Approx(s.objective).epsilon(1e-8));
    CHECK(cs.min_gram_eigenvalue >= -1e-8);
    for (const auto& [label, Q] : cs.gram_blocks) CHECK((Q - Q.transpose()).norm() == 0.0);
    // an overapproximation of the invariant set contains the origin, an equilibrium
    CHECK(cs.w.eval(std::vector<double>{0, 0, 0}) >= 1.0 - 1e-6);

    // corrupting a coefficient of w is caught
    Eigen::VectorXd bad = s.free_values;
    bad[static_cast<Eigen::Index>(r.v_exponents.size())] += 1e-2;
    CHECK_FALSE(recover(r, s.block_values, bad).residual_ok);
}

TEST_CASE("grid sampling of the outer approximation") {
    const Box line{{-1.0}, {1.0}};
    const auto x2 = parse_polynomial("x1^2", {"x1"});
    const auto pts = outer_approx_grid(x2, line, {5});
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x[0] == -1.0);
    CHECK(pts[1].x[0] == 1.0);

    const Box sq = Box::cube(2);
    CHECK(outer_approx_grid(Polynomial::constant(2, 2.0), sq, {4, 3}).size() == 12);
    CHECK(outer_approx_grid(Polynomial(2), sq, {4, 3}).empty());
    CHECK_THROWS(outer_approx_grid(Polynomial(2), sq, {1, 3}));

    std::ostringstream os;
    write_grid_csv(os, pts, {"x1"});
    CHECK(os.str().substr(0, 5) == "x1,w\n");
}

TEST_CASE("batch evaluation matches pointwise evaluation") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<std::string> xyz{"x1", "x2", "x3"};
    const auto p = parse_polynomial("3*x1^4*x2 - x2^3*x3^2 + 0.5*x1*x3 - 7 + x3^5", xyz);
    Eigen::MatrixXd pts(3, 50);
    for (Eigen::Index c = 0; c < 50; ++c)
        for (Eigen::Index r = 0; r < 3; ++r) pts(r, c) = u(rng);
    const Eigen::VectorXd v = eval_batch(p, pts);
    for (Eigen::Index c = 0; c < 50; ++c) {
        const std::vector<double> x{pts(0, c), pts(1, c), pts(2, c)};
        CHECK(v[c] == doctest::Approx(p.eval(x)).epsilon(1e-13));
    }
}

TEST_CASE("relaxation values are monotone and sign symmetry matches the dense optimum") {
    const ProblemFile pf = load("lorenz.json");
    auto opt = [&](RelaxationConfig c) {
        const Relaxation r = assemble(pf.system, pf.box, c);
        const SdpSolution s = solve(r.problem);
        REQUIRE(s.status != SolveStatus::infeasible_flag);
        REQUIRE(s.status != SolveStatus::max_iter);
        return s.objective;
    };
    const double tol = 1e-6;
    const double ts_d2 = opt(cfg(2, Mode::term_sparsity, 1, 1));
    const double ts_d2_s2 = opt(cfg(2, Mode::term_sparsity, 2, 1));
    const double ts_d2_l2 = opt(cfg(2, Mode::term_sparsity, 1, 2));
    const double ts_d3 = opt(cfg(3, Mode::term_sparsity, 1, 1));
    const double fd_d2 = opt(cfg(2, Mode::fully_dense));
    const double ss_d2 = opt(cfg(2, Mode::sign_symmetry));
    CHECK(ts_d2_s2 <= ts_d2 * (1 + tol));
    CHECK(ts_d2_l2 <= ts_d2 * (1 + tol));
    CHECK(ts_d3 <= ts_d2 * (1 + tol));
    CHECK(ts_d2 >= fd_d2 * (1 - tol));
    CHECK(ss_d2 == doctest::Approx(fd_d2).epsilon(1e-4));
    // frozen from an independent conic-solver model of the same relaxation
    CHECK(fd_d2 == doctest::Approx(4.554011).epsilon(1e-5));
    CHECK(ts_d2 == doctest::Approx(5.567028).epsilon(1e-5));
}
