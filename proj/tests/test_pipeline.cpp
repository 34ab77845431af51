#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "tsdyn/pipeline.hpp"
#include "tsdyn/problem_io.hpp"

using namespace tsdyn;

namespace {

int count_fields(const std::string& line) { return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST_CASE("problem files: parsing, defaults and errors") {
    const ProblemFile pf = load_problem(oracle::data_file("lorenz.json"));
    CHECK(pf.name == "lorenz");
    CHECK(pf.system.dim() == 3);
    CHECK(pf.system.num_constraints() == 3);
    CHECK(pf.box.lo == std::vector<double>{-1, -1, -1});
    REQUIRE(pf.config.d.has_value());
    CHECK(*pf.config.d == 2);

    // constraints default to the box
    const ProblemFile nb = parse_problem(
        R"({"variables": ["x", "y"], "dynamics": ["-x", "-y"], "box": {"lo": [-1, 0], "hi": [1, 2]}})");
    REQUIRE(nb.system.num_constraints() == 2);
    CHECK(nb.system.constraints[1].eval(std::vector<double>{0.0, 1.0}) == 1.0);
    CHECK(nb.system.constraints[1].eval(std::vector<double>{0.0, 2.0}) == 0.0);

    CHECK_THROWS(parse_problem(R"({"variables": ["x"], "dynamics": ["z"], "box": {"lo": [-1], "hi": [1]}})"));
    CHECK_THROWS(parse_problem(R"({"variables": ["x"], "box": {"lo": [-1], "hi": [1]}})"));
    CHECK_THROWS(parse_problem(R"({"variables": ["x"], "dynamics": ["x"], "box": {"lo": [1], "hi": [-1]}})"));
    CHECK_THROWS(parse_problem("{not json"));
    CHECK_THROWS(load_problem(oracle::data_file("does_not_exist.json")));

    const ProblemFile back = parse_problem(problem_to_json(pf));
    for (std::size_t i = 0; i < 3; ++i) CHECK(back.system.field[i] == pf.system.field[i]);
    CHECK(back.config.d == pf.config.d);
}

TEST_CASE("configuration precedence: flags over file over defaults") {
    RelaxationConfig c;  // defaults
    CHECK(c.d == 1);
    CHECK(c.l == 1);
    CHECK(c.beta == 1.0);
    CHECK(c.mode == Mode::term_sparsity);
    CHECK(c.extension == ChordalExtension::maximal);

    ConfigOverrides file;
    file.d = 3;
    file.s = 2;
    file.mode = Mode::fully_dense;
    ConfigOverrides flags;
    flags.s = 4;
    flags.beta = 0.5;
    file.apply_to(c);
    flags.apply_to(c);
    CHECK(c.d == 3);
    CHECK(c.s == 4);
    CHECK(c.beta == 0.5);
    CHECK(c.mode == Mode::fully_dense);
}

TEST_CASE("run report is consistent with the problem digest") {
    const ProblemFile pf = load_problem(oracle::data_file("lorenz.json"));
    RelaxationConfig c;
    c.d = 2;
    c.s = 2;
    const RunResult res = run_relaxation(pf, c);
    const RunReport& r = res.report;
    CHECK(r.status == SolveStatus::optimal);
    CHECK(r.cert_ok);
    CHECK(r.objective == doctest::Approx(r.cert_objective).epsilon(1e-8));
    CHECK(r.num_blocks == res.relax.problem.num_blocks());
    CHECK_NOTHROW(cross_check(r, res.relax.problem));
    CHECK(r.a_sizes == std::vector<std::size_t>{12, 19, 19});
    CHECK(r.s_stable == 2);

    RunReport tampered = r;
    tampered.num_blocks += 1;
    CHECK_THROWS_AS(cross_check(tampered, res.relax.problem), std::logic_error);
    tampered = r;
    tampered.blocks[0].sizes[0] += 1;
    CHECK_THROWS_AS(cross_check(tampered, res.relax.problem), std::logic_error);

    const std::string header = csv_header();
    const std::string row = csv_row(r);
    CHECK(header.rfind("name,mode,d,s,l,beta,extension,status,objective,", 0) == 0);
    CHECK(count_fields(row) == count_fields(header));
    CHECK(row.find('\n') == std::string::npos);

    std::ostringstream os;
    write_report(os, r);
    CHECK(os.str().find("status optimal") != std::string::npos);
    CHECK(os.str().find("blocks a: 6 4") != std::string::npos);
}

TEST_CASE("every run reproduces when re-solving its exported SDPA file") {
    const ProblemFile pf = load_problem(oracle::data_file("lorenz.json"));
    RelaxationConfig c;
    c.d = 2;
    const RunResult res = run_relaxation(pf, c);
    const SdpSolution again = solve(parse_sdpa(export_sdpa(res.relax.problem)));
    CHECK(again.objective == doctest::Approx(res.report.objective).epsilon(1e-6));
}

TEST_CASE("compare sweeps keep their order and record failures") {
    const ProblemFile pf = load_problem(oracle::data_file("lorenz.json"));
    RelaxationConfig base;
    const std::vector<CompareCell> modes{parse_cell_mode("ts"), parse_cell_mode("ts:2"), parse_cell_mode("ss"),
                                         parse_cell_mode("fd")};
    CHECK(modes[1].s == 2);
    CHECK(modes[2].mode == Mode::sign_symmetry);
    CHECK_THROWS(parse_cell_mode("ts:0"));
    CHECK_THROWS(parse_cell_mode("dense"));

    const auto serial = compare(pf, base, {0, 1, 2}, modes, 1);
    const auto parallel = compare(pf, base, {0, 1, 2}, modes, 3);
    REQUIRE(serial.size() == 12);
    REQUIRE(parallel.size() == 12);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].d == parallel[i].d);
        CHECK(serial[i].mode == parallel[i].mode);
        CHECK(serial[i].report.has_value() == parallel[i].report.has_value());
        if (serial[i].report) CHECK(serial[i].report->objective == parallel[i].report->objective);
    }
    // d = 0 is below the minimum order: cells fail, the sweep continues
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK_FALSE(serial[i].report.has_value());
        CHECK_FALSE(serial[i].error.empty());
    }
    for (std::size_t i = 4; i < 12; ++i) CHECK(serial[i].report.has_value());

    const auto checks = compare_checks(serial);
    CHECK_FALSE(checks.empty());
    for (const auto& line : checks) CHECK_MESSAGE(line.rfind("ok", 0) == 0, line);

    std::ostringstream os;
    write_compare_table(os, serial);
    CHECK(os.str().find("ts:2") != std::string::npos);
}
