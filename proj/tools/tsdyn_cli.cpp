// tsdyn: build and solve sparse moment-SOS relaxations for outer
// approximations of maximum positively invariant sets.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tsdyn/kernels.hpp"
#include "tsdyn/pipeline.hpp"
#include "tsdyn/problem_io.hpp"
#include "tsdyn/random_model.hpp"
#include "tsdyn/relax.hpp"
#include "tsdyn/sdp.hpp"
#include "tsdyn/symmetry.hpp"

using namespace tsdyn;

namespace {

struct ConfigFlags {
    std::optional<int> d, s, l;
    std::optional<double> beta;
    std::optional<std::string> mode, extension;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--d", d, "relaxation order (polynomials up to degree 2d)")->check(CLI::PositiveNumber);
        cmd->add_option("--s", s, "term-sparsity iterations on the v side")->check(CLI::PositiveNumber);
        cmd->add_option("--l", l, "term-sparsity iterations on the w side")->check(CLI::PositiveNumber);
        cmd->add_option("--beta", beta, "discount factor");
        cmd->add_option("--mode", mode, "ts | ss | fd")->check(CLI::IsMember({"ts", "ss", "fd"}));
        cmd->add_option("--extension", extension, "maximal | min-degree")
            ->check(CLI::IsMember({"maximal", "min-degree"}));
    }

    // defaults < problem file < flags
    RelaxationConfig resolve(const ProblemFile& pf) const {
        RelaxationConfig c;
        pf.config.apply_to(c);
        ConfigOverrides o;
        o.d = d;
        o.s = s;
        o.l = l;
        o.beta = beta;
        if (mode) o.mode = parse_mode(*mode);
        if (extension) o.extension = parse_extension(*extension);
        o.apply_to(c);
        c.validate(pf.system);
        return c;
    }
};

struct SolverFlags {
    double tol = SolverOptions{}.tol;
    int max_iter = SolverOptions{}.max_iter;
    std::string direction = "nt";
    bool verbose = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "solver tolerance")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "solver iteration limit")->capture_default_str();
        cmd->add_option("--direction", direction, "nt | hkm")->check(CLI::IsMember({"nt", "hkm"}))->capture_default_str();
        cmd->add_flag("-v,--verbose", verbose, "print solver iterations to stderr");
    }

    SolverOptions options() const {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.verbose = verbose;
        o.direction = direction == "hkm" ? SearchDirection::hkm : SearchDirection::nt;
        return o;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    return f;
}

void write_grid(const std::string& path, const RunResult& res, int resolution, const ProblemFile& pf) {
    std::vector<int> resv(pf.system.dim(), resolution);
    const auto pts = outer_approx_grid(res.certificate.w, pf.box, resv);
    auto f = open_out(path);
    write_grid_csv(f, pts, pf.system.variables);
}

std::string bits(std::uint64_t r, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += ((r >> i) & 1u) ? '1' : '0';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tsdyn: sparse moment-SOS relaxations for invariant-set approximation"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "assemble, solve and report one relaxation");
    std::string run_file, run_csv, run_report, run_sdpa, run_grid, run_solution;
    bool run_chain = false;
    int run_res = 101;
    ConfigFlags run_cfg;
    SolverFlags run_solver;
    run->add_option("problem", run_file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    run_cfg.add_to(run);
    run_solver.add_to(run);
    run->add_option("--csv", run_csv, "append a CSV row (header written if the file is new)");
    run->add_option("--report", run_report, "write the text report here instead of stdout");
    run->add_option("--sdpa", run_sdpa, "also export the SDP in SDPA sparse format");
    run->add_option("--solution", run_solution, "write the solution dump (objective, residuals, spectra)");
    run->add_option("--grid", run_grid, "write grid points with w >= 1 as CSV");
    run->add_option("--grid-resolution", run_res, "grid points per axis")->check(CLI::Range(2, 100000))->capture_default_str();
    run->add_flag("--chain", run_chain, "print the support chain");

    // compare
    auto* cmp = app.add_subcommand("compare", "sweep orders and modes, print a table");
    std::string cmp_file, cmp_csv;
    std::vector<int> cmp_orders;
    std::vector<std::string> cmp_modes{"ts", "ss", "fd"};
    int jobs = 1;
    ConfigFlags cmp_cfg;
    SolverFlags cmp_solver;
    cmp->add_option("problem", cmp_file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    cmp->add_option("--orders", cmp_orders, "relaxation orders d")->required()->delimiter(',');
    cmp->add_option("--modes", cmp_modes, "ts[:s], ss, fd")->delimiter(',')->capture_default_str();
    cmp->add_option("--jobs", jobs, "parallel cells")->check(CLI::PositiveNumber)->capture_default_str();
    cmp->add_option("--csv", cmp_csv, "write all rows as CSV");
    cmp_cfg.add_to(cmp);
    cmp_solver.add_to(cmp);

    // symmetries
    auto* sym = app.add_subcommand("symmetries", "sign symmetries of a system");
    std::string sym_file;
    std::optional<int> sym_d;
    sym->add_option("problem", sym_file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    sym->add_option("--d", sym_d, "order used for the Gram basis blocks (default: minimum order)");

    // random-model
    auto* rnd = app.add_subcommand("random-model", "generate a random test system");
    std::size_t rnd_n = 0;
    std::uint64_t rnd_seed = 0;
    std::string rnd_out;
    rnd->add_option("--n", rnd_n, "number of variables (>= 5)")->required();
    rnd->add_option("--seed", rnd_seed, "random seed")->required();
    rnd->add_option("-o,--output", rnd_out, "problem file to write (default stdout)");

    // export-sdpa
    auto* exp = app.add_subcommand("export-sdpa", "write the SDP in SDPA sparse format");
    std::string exp_file, exp_out;
    ConfigFlags exp_cfg;
    exp->add_option("problem", exp_file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    exp->add_option("-o,--output", exp_out, "output .dat-s (default stdout)");
    exp_cfg.add_to(exp);

    // grid
    auto* grd = app.add_subcommand("grid", "solve and sample the outer approximation {w >= 1}");
    std::string grd_file, grd_out;
    int grd_res = 101;
    ConfigFlags grd_cfg;
    SolverFlags grd_solver;
    grd->add_option("problem", grd_file, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    grd->add_option("-o,--output", grd_out, "CSV file (default stdout)");
    grd->add_option("--resolution", grd_res, "grid points per axis")->check(CLI::Range(2, 100000))->capture_default_str();
    grd_cfg.add_to(grd);
    grd_solver.add_to(grd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const ProblemFile pf = load_problem(run_file);
            const RelaxationConfig cfg = run_cfg.resolve(pf);
            const RunResult res = run_relaxation(pf, cfg, run_solver.options());
            if (run_report.empty()) {
                write_report(std::cout, res.report);
            } else {
                auto f = open_out(run_report);
                write_report(f, res.report);
            }
            if (run_chain && res.relax.structure.chain) write_chain(std::cout, *res.relax.structure.chain, pf.system.variables);
            if (!run_csv.empty()) {
                const bool fresh = !std::ifstream(run_csv).good();
                std::ofstream f(run_csv, std::ios::app);
                if (!f) throw std::runtime_error("cannot write '" + run_csv + "'");
                if (fresh) f << csv_header() << '\n';
                f << csv_row(res.report) << '\n';
            }
            if (!run_sdpa.empty()) {
                auto f = open_out(run_sdpa);
                f << export_sdpa(res.relax.problem);
            }
            if (!run_solution.empty()) {
                auto f = open_out(run_solution);
                write_solution(f, res.relax.problem, res.solution);
            }
            if (!run_grid.empty()) write_grid(run_grid, res, run_res, pf);
            return res.report.status == SolveStatus::infeasible_flag ? 2 : 0;
        }
        if (*cmp) {
            const ProblemFile pf = load_problem(cmp_file);
            RelaxationConfig base;
            pf.config.apply_to(base);
            ConfigOverrides o;
            o.s = cmp_cfg.s;
            o.l = cmp_cfg.l;
            o.beta = cmp_cfg.beta;
            if (cmp_cfg.extension) o.extension = parse_extension(*cmp_cfg.extension);
            o.apply_to(base);
            std::vector<CompareCell> modes;
            for (const auto& t : cmp_modes) {
                CompareCell c = parse_cell_mode(t);
                if (t.find(':') == std::string::npos) c.s = base.s;
                modes.push_back(c);
            }
            const auto cells = compare(pf, base, cmp_orders, modes, jobs, cmp_solver.options());
            write_compare_table(std::cout, cells);
            for (const auto& line : compare_checks(cells)) std::cout << "check " << line << '\n';
            if (!cmp_csv.empty()) {
                auto f = open_out(cmp_csv);
                f << csv_header() << ",error\n";
                for (const auto& c : cells) {
                    if (c.report) {
                        f << csv_row(*c.report) << ",\n";
                    } else {
                        std::string err = c.error;
                        for (char& ch : err)
                            if (ch == ',' || ch == '\n') ch = ';';
                        f << pf.name << ',' << to_string(c.mode) << ',' << c.d << ',' << c.s
                          << ",,,,error,,,,,,,,,,,,,,," << err << '\n';
                    }
                }
            }
            for (const auto& c : cells)
                if (!c.report) return 1;
            return 0;
        }
        if (*sym) {
            const ProblemFile pf = load_problem(sym_file);
            const int d = sym_d.value_or(pf.system.min_order());
            const SignSymmetryGroup g = sign_symmetries(pf.system, d);
            const std::size_t n = pf.system.dim();
            std::cout << "variables";
            for (const auto& v : pf.system.variables) std::cout << ' ' << v;
            std::cout << "\nrank " << g.rank() << '\n';
            for (auto r : g.basis()) std::cout << "generator " << bits(r, n) << '\n';
            if (g.rank() <= 16)
                for (auto r : g.elements()) std::cout << "element " << bits(r, n) << '\n';
            const SupportSet basis = gram_basis(pf.system, d, 0);
            const auto blocks = symmetry_blocks(g, basis);
            std::cout << "gram blocks at d=" << d << ":";
            for (const auto& b : blocks) std::cout << ' ' << b.size();
            std::cout << '\n';
            for (const auto& b : blocks) {
                std::cout << "block";
                for (auto i : b) std::cout << ' ' << to_string(basis.elements()[i], pf.system.variables);
                std::cout << '\n';
            }
            return 0;
        }
        if (*rnd) {
            const RandomModel rm = random_model(rnd_n, rnd_seed);
            const std::string text = problem_to_json(rm.problem);
            if (rnd_out.empty()) {
                std::cout << text;
            } else {
                auto f = open_out(rnd_out);
                f << text;
            }
            std::cerr << "edges";
            for (const auto& [i, j] : rm.edges) std::cerr << " (" << i + 1 << ',' << j + 1 << ')';
            std::cerr << "\ndraws " << rm.draws << '\n';
            return 0;
        }
        if (*exp) {
            const ProblemFile pf = load_problem(exp_file);
            const Relaxation relax = assemble(pf.system, pf.box, exp_cfg.resolve(pf));
            const std::string text = export_sdpa(relax.problem);
            if (exp_out.empty()) {
                std::cout << text;
            } else {
                auto f = open_out(exp_out);
                f << text;
            }
            return 0;
        }
        if (*grd) {
            const ProblemFile pf = load_problem(grd_file);
            const RunResult res = run_relaxation(pf, grd_cfg.resolve(pf), grd_solver.options());
            std::cerr << "objective " << res.report.objective << " status " << to_string(res.report.status) << '\n';
            std::vector<int> resv(pf.system.dim(), grd_res);
            const auto pts = outer_approx_grid(res.certificate.w, pf.box, resv);
            if (grd_out.empty()) {
                write_grid_csv(std::cout, pts, pf.system.variables);
            } else {
                auto f = open_out(grd_out);
                write_grid_csv(f, pts, pf.system.variables);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "tsdyn: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
