#include "tsdyn/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tsdyn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string join_sizes(const std::vector<std::size_t>& v, char sep = ' ') {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

int fixed_point(const std::vector<SupportSet>& sets) {
    for (std::size_t k = 0; k + 1 < sets.size(); ++k)
        if (sets[k] == sets[k + 1]) return static_cast<int>(k + 1);
    return 0;
}

std::string cell_label(const CompareCell& c) {
    return c.mode == Mode::term_sparsity ? "ts:" + std::to_string(c.s) : to_string(c.mode);
}

}  // namespace

RunReport describe(const std::string& name, const Relaxation& relax) {
    RunReport r;
    r.name = name;
    r.config = relax.config;
    if (const auto& ch = relax.structure.chain) {
        for (const auto& a : ch->a_sets) r.a_sizes.push_back(a.size());
        for (const auto& b : ch->b_sets) r.b_sizes.push_back(b.size());
        r.s_stable = fixed_point(ch->a_sets);
        r.l_stable = fixed_point(ch->b_sets);
    }
    if (const auto& g = relax.structure.symmetry) r.symmetry_rank = g->rank();

    const SdpProblem& p = relax.problem;
    std::map<char, std::vector<std::size_t>> fam;
    for (std::size_t k = 0; k < p.psd_blocks.size(); ++k) {
        const char c = "abc"[static_cast<int>(relax.origins[k].family)];
        fam[c].push_back(p.psd_blocks[k].dim);
        r.max_block = std::max(r.max_block, p.psd_blocks[k].dim);
    }
    for (auto& [c, sizes] : fam) {
        std::sort(sizes.rbegin(), sizes.rend());
        r.blocks.push_back({std::string(1, c), sizes});
    }
    r.num_blocks = p.num_blocks();
    r.equalities = p.num_equalities();
    r.free_vars = p.num_free();
    r.gram_scalars = p.num_gram_scalars();
    r.digest = problem_digest(p);
    return r;
}

void cross_check(const RunReport& report, const SdpProblem& problem) {
    // re-derive the counts from the digest text rather than from the problem
    std::istringstream in(problem_digest(problem));
    std::string key;
    std::map<std::string, std::size_t> counts;
    std::size_t digest_blocks = 0, digest_scalars = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        ls >> key;
        if (key == "block_sizes") {
            std::string label;
            ls >> label;
            std::size_t sz = 0;
            while (ls >> sz) {
                ++digest_blocks;
                digest_scalars += sz * (sz + 1) / 2;
            }
        } else {
            std::size_t v = 0;
            ls >> v;
            counts[key] = v;
        }
    }
    std::size_t report_blocks = 0, report_scalars = 0;
    for (const auto& f : report.blocks)
        for (auto s : f.sizes) {
            ++report_blocks;
            report_scalars += s * (s + 1) / 2;
        }
    auto expect = [](bool ok, const std::string& what) {
        if (!ok) throw std::logic_error("report disagrees with problem digest: " + what);
    };
    expect(counts["blocks"] == report.num_blocks && digest_blocks == report_blocks, "block count");
    expect(counts["equalities"] == report.equalities, "equality count");
    expect(counts["free"] == report.free_vars, "free variable count");
    expect(counts["gram_scalars"] == report.gram_scalars && digest_scalars == report_scalars, "Gram scalar count");
}

RunResult run_relaxation(const ProblemFile& pf, const RelaxationConfig& config, const SolverOptions& options) {
    auto t0 = Clock::now();
    Relaxation relax = assemble(pf.system, pf.box, config);
    RunReport rep = describe(pf.name, relax);
    rep.assemble_seconds = seconds_since(t0);
    cross_check(rep, relax.problem);

    t0 = Clock::now();
    SdpSolution sol = solve(relax.problem, options);
    rep.solve_seconds = seconds_since(t0);
    rep.status = sol.status;
    rep.objective = sol.objective;
    rep.residuals = sol.residuals;
    rep.iterations = sol.iterations;

    CertificateSet cert = recover(relax, sol);
    rep.cert_residual = cert.max_residual;
    rep.cert_ok = cert.residual_ok;
    rep.cert_objective = cert.objective;
    return RunResult{std::move(rep), std::move(relax), std::move(sol), std::move(cert)};
}

void write_report(std::ostream& os, const RunReport& r) {
    const auto& c = r.config;
    os << "problem " << r.name << '\n';
    os << "config mode=" << to_string(c.mode) << " d=" << c.d << " s=" << c.s << " l=" << c.l
       << " beta=" << fmt("%g", c.beta) << " extension=" << to_string(c.extension) << '\n';
    if (!r.a_sizes.empty()) {
        auto fixed = [](int k) { return k > 0 ? "fixed point at step " + std::to_string(k) : std::string("not stabilized"); };
        os << "chain A sizes " << join_sizes(r.a_sizes) << " (" << fixed(r.s_stable) << ")\n";
        os << "chain B sizes " << join_sizes(r.b_sizes) << " (" << fixed(r.l_stable) << ")\n";
    }
    if (c.mode == Mode::sign_symmetry) os << "symmetry rank " << r.symmetry_rank << '\n';
    for (const auto& f : r.blocks) os << "blocks " << f.family << ": " << join_sizes(f.sizes) << '\n';
    os << "sdp blocks=" << r.num_blocks << " max_block=" << r.max_block << " equalities=" << r.equalities
       << " free=" << r.free_vars << " gram_scalars=" << r.gram_scalars << '\n';
    os << "status " << to_string(r.status) << " iterations " << r.iterations << '\n';
    os << "objective " << fmt("%.10g", r.objective) << '\n';
    os << "residuals pinf=" << fmt("%.2e", r.residuals.primal_infeas) << " dinf=" << fmt("%.2e", r.residuals.dual_infeas)
       << " gap=" << fmt("%.2e", r.residuals.gap) << '\n';
    os << "certificate residual=" << fmt("%.3e", r.cert_residual) << (r.cert_ok ? " ok" : " FAILED")
       << " integral=" << fmt("%.10g", r.cert_objective) << '\n';
    os << "time assemble=" << fmt("%.3f", r.assemble_seconds) << "s solve=" << fmt("%.3f", r.solve_seconds) << "s\n";
}

std::string csv_header() {
    return "name,mode,d,s,l,beta,extension,status,objective,primal_infeas,dual_infeas,gap,iterations,"
           "blocks,max_block,equalities,free,gram_scalars,cert_residual,cert_ok,assemble_s,solve_s";
}

std::string csv_row(const RunReport& r) {
    const auto& c = r.config;
    std::ostringstream os;
    os << r.name << ',' << to_string(c.mode) << ',' << c.d << ',' << c.s << ',' << c.l << ',' << fmt("%g", c.beta) << ','
       << to_string(c.extension) << ',' << to_string(r.status) << ',' << fmt("%.10g", r.objective) << ','
       << fmt("%.3e", r.residuals.primal_infeas) << ',' << fmt("%.3e", r.residuals.dual_infeas) << ','
       << fmt("%.3e", r.residuals.gap) << ',' << r.iterations << ',' << r.num_blocks << ',' << r.max_block << ','
       << r.equalities << ',' << r.free_vars << ',' << r.gram_scalars << ',' << fmt("%.3e", r.cert_residual) << ','
       << (r.cert_ok ? 1 : 0) << ',' << fmt("%.3f", r.assemble_seconds) << ',' << fmt("%.3f", r.solve_seconds);
    return os.str();
}

CompareCell parse_cell_mode(const std::string& token) {
    CompareCell cell;
    const auto colon = token.find(':');
    cell.mode = parse_mode(token.substr(0, colon));
    if (colon != std::string::npos) {
        if (cell.mode != Mode::term_sparsity)
            throw std::invalid_argument("only ts takes an iteration count (got '" + token + "')");
        try {
            cell.s = std::stoi(token.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad iteration count in '" + token + "'");
        }
        if (cell.s < 1) throw std::invalid_argument("iteration count must be >= 1 in '" + token + "'");
    }
    return cell;
}

std::vector<CompareCell> compare(const ProblemFile& pf, const RelaxationConfig& base, const std::vector<int>& orders,
                                 const std::vector<CompareCell>& modes, int jobs, const SolverOptions& options) {
    std::vector<CompareCell> cells;
    for (int d : orders)
        for (const auto& m : modes) {
            CompareCell c = m;
            c.d = d;
            cells.push_back(c);
        }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            CompareCell& c = cells[i];
            RelaxationConfig cfg = base;
            cfg.d = c.d;
            cfg.mode = c.mode;
            cfg.s = c.s;
            try {
                cfg.validate(pf.system);
                c.report = run_relaxation(pf, cfg, options).report;
            } catch (const std::exception& e) {
                c.error = e.what();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(n, cells.size()); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return cells;
}

void write_compare_table(std::ostream& os, const std::vector<CompareCell>& cells) {
    char line[256];
    std::snprintf(line, sizeof line, "%4s  %-6s  %-14s  %-13s  %9s  %6s  %9s  %9s\n", "2d", "mode", "opt", "status",
                  "max_block", "blocks", "time_s", "gap");
    os << line;
    for (const auto& c : cells) {
        if (!c.report) {
            std::snprintf(line, sizeof line, "%4d  %-6s  error: ", 2 * c.d, cell_label(c).c_str());
            os << line << c.error << '\n';
            continue;
        }
        const RunReport& r = *c.report;
        std::snprintf(line, sizeof line, "%4d  %-6s  %-14.8g  %-13s  %9zu  %6zu  %9.2f  %9.2e\n", 2 * c.d,
                      cell_label(c).c_str(), r.objective, to_string(r.status).c_str(), r.max_block, r.num_blocks,
                      r.assemble_seconds + r.solve_seconds, r.residuals.gap);
        os << line;
    }
}

std::vector<std::string> compare_checks(const std::vector<CompareCell>& cells, double rel_tol) {
    std::vector<std::string> out;
    auto rel = [](double a, double b) { return (a - b) / std::max(1.0, std::abs(b)); };
    auto find = [&](int d, Mode m) -> const CompareCell* {
        const CompareCell* best = nullptr;
        for (const auto& c : cells)
            if (c.d == d && c.mode == m && c.report && (!best || c.s > best->s)) best = &c;
        return best;
    };
    std::vector<int> orders;
    for (const auto& c : cells)
        if (std::find(orders.begin(), orders.end(), c.d) == orders.end()) orders.push_back(c.d);
    std::sort(orders.begin(), orders.end());

    for (int d : orders) {
        const CompareCell* ts = find(d, Mode::term_sparsity);
        const CompareCell* ss = find(d, Mode::sign_symmetry);
        const CompareCell* fd = find(d, Mode::fully_dense);
        char buf[200];
        if (ts && ss) {
            const double e = rel(ts->report->objective, ss->report->objective);
            std::snprintf(buf, sizeof buf, "%s 2d=%d ts>=ss (%.3e)", e >= -rel_tol ? "ok  " : "FAIL", 2 * d, e);
            out.push_back(buf);
        }
        if (ss && fd) {
            const double e = rel(ss->report->objective, fd->report->objective);
            std::snprintf(buf, sizeof buf, "%s 2d=%d ss==fd (%.3e)", std::abs(e) <= rel_tol ? "ok  " : "FAIL", 2 * d, e);
            out.push_back(buf);
        }
    }
    // monotone in d for every mode/s label
    std::map<std::string, std::vector<const CompareCell*>> by_label;
    for (const auto& c : cells)
        if (c.report) by_label[cell_label(c)].push_back(&c);
    for (auto& [label, list] : by_label) {
        std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->d < b->d; });
        for (std::size_t i = 1; i < list.size(); ++i) {
            const double e = rel(list[i]->report->objective, list[i - 1]->report->objective);
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s %s 2d=%d<=2d=%d (%.3e)", e <= rel_tol ? "ok  " : "FAIL", label.c_str(),
                          2 * list[i]->d, 2 * list[i - 1]->d, e);
            out.push_back(buf);
        }
    }
    return out;
}

}  // namespace tsdyn
