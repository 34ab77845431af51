#include "tsdyn/relax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "tsdyn/kernels.hpp"

namespace tsdyn {

Box Box::cube(std::size_t dim, double radius) {
    return Box{std::vector<double>(dim, -radius), std::vector<double>(dim, radius)};
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
    return v;
}

void Box::validate(std::size_t dim) const {
    if (lo.size() != dim || hi.size() != dim)
        throw std::invalid_argument("box has " + std::to_string(lo.size()) + " bounds for " + std::to_string(dim) +
                                    " variables");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(lo[i] < hi[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw std::invalid_argument("box bound " + std::to_string(i + 1) + " must satisfy lo < hi");
}

double box_moment(const Exponent& alpha, const Box& box) {
    double m = 1.0;
    for (std::size_t i = 0; i < alpha.dim(); ++i) {
        const int k = alpha[i] + 1;
        m *= (std::pow(box.hi[i], k) - std::pow(box.lo[i], k)) / k;
    }
    return m;
}

namespace {

char family_char(Certificate c) { return c == Certificate::a ? 'a' : (c == Certificate::b ? 'b' : 'c'); }

using RowMap = std::map<Exponent, SdpEquality>;

void add_gram_block(RowMap& rows, std::uint32_t block, const std::vector<Exponent>& monos, const Polynomial& pj) {
    for (std::size_t r = 0; r < monos.size(); ++r) {
        for (std::size_t c = r; c < monos.size(); ++c) {
            const Exponent s = monos[r] + monos[c];
            for (const auto& [delta, coef] : pj.terms())
                rows[s + delta].entries.push_back(
                    {block, static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), coef});
        }
    }
}

std::string chain_summary(const SupportChain& chain) {
    std::ostringstream os;
    os << "A:";
    for (const auto& a : chain.a_sets) os << ' ' << a.size();
    os << " B:";
    for (const auto& b : chain.b_sets) os << ' ' << b.size();
    return os.str();
}

}  // namespace

Relaxation assemble(const DynamicalSystem& sys, const Box& box, const RelaxationConfig& config) {
    sys.validate();
    box.validate(sys.dim());
    Relaxation R;
    R.system = sys;
    R.config = config;
    R.box = box;
    R.structure = block_structure(sys, config);
    const BlockStructure& bs = R.structure;
    const auto& vars = sys.variables;

    SdpProblem& P = R.problem;
    R.v_exponents = bs.v_support.elements();
    R.w_exponents = bs.w_support.elements();
    for (const auto& a : R.v_exponents) P.free_vars.push_back("v:" + to_string(a, vars));
    for (const auto& a : R.w_exponents) P.free_vars.push_back("w:" + to_string(a, vars));
    const auto nv = static_cast<std::uint32_t>(R.v_exponents.size());

    RowMap lie_rows, cover_rows, shift_rows;

    // Gram blocks, one per clique, for each family
    auto add_family = [&](Certificate fam, const GramLayout& layout, RowMap& rows) {
        for (std::size_t j = 0; j < layout.bases.size(); ++j) {
            const Polynomial pj = sys.constraint_with_unit(j);
            const auto& basis = layout.bases[j].elements();
            for (std::size_t q = 0; q < layout.cliques[j].cliques.size(); ++q) {
                BlockOrigin origin{fam, j, q, {}};
                for (auto idx : layout.cliques[j].cliques[q]) origin.monomials.push_back(basis[idx]);
                const auto block = static_cast<std::uint32_t>(P.psd_blocks.size());
                P.psd_blocks.push_back({std::string(1, family_char(fam)) + std::to_string(j) + "#" + std::to_string(q + 1),
                                        origin.monomials.size()});
                add_gram_block(rows, block, origin.monomials, pj);
                R.origins.push_back(std::move(origin));
            }
        }
    };
    add_family(Certificate::a, bs.a_layout, lie_rows);
    add_family(Certificate::b, bs.bc_layout, cover_rows);
    add_family(Certificate::c, bs.bc_layout, shift_rows);

    // sum_j a_j p_j - (beta v - grad(v).f) = 0
    for (std::uint32_t k = 0; k < nv; ++k) {
        const Polynomial lie = lie_polynomial(Polynomial::monomial(R.v_exponents[k]), sys, config.beta);
        for (const auto& [alpha, coef] : lie.terms())
            lie_rows[alpha].free_terms.push_back({k, -coef});
    }
    // sum_j b_j p_j - w = 0 and sum_j c_j p_j - w + v = -1
    for (std::uint32_t k = 0; k < R.w_exponents.size(); ++k) {
        cover_rows[R.w_exponents[k]].free_terms.push_back({nv + k, -1.0});
        shift_rows[R.w_exponents[k]].free_terms.push_back({nv + k, -1.0});
    }
    for (std::uint32_t k = 0; k < nv; ++k) shift_rows[R.v_exponents[k]].free_terms.push_back({k, 1.0});
    shift_rows[Exponent(sys.dim())].rhs = -1.0;

    auto emit = [&](RowMap& rows, const char* tag) {
        for (auto& [alpha, eq] : rows) {
            eq.label = std::string(tag) + ":" + to_string(alpha, vars);
            P.equalities.push_back(std::move(eq));
        }
    };
    emit(lie_rows, "lie");
    emit(cover_rows, "cover");
    emit(shift_rows, "shift");

    P.objective_free.assign(P.free_vars.size(), 0.0);
    for (std::size_t k = 0; k < R.w_exponents.size(); ++k)
        P.objective_free[nv + k] = box_moment(R.w_exponents[k], box);

    P = P.normalized();
    // identities that cancel exactly leave 0 = 0 rows behind
    std::vector<SdpEquality> kept;
    for (auto& eq : P.equalities) {
        if (eq.entries.empty() && eq.free_terms.empty()) {
            if (eq.rhs != 0.0) throw std::invalid_argument("relaxation is infeasible: row " + eq.label + " reads 0 = rhs");
            continue;
        }
        kept.push_back(std::move(eq));
    }
    P.equalities = std::move(kept);

    P.metadata["mode"] = to_string(config.mode);
    P.metadata["d"] = std::to_string(config.d);
    P.metadata["s"] = std::to_string(config.s);
    P.metadata["l"] = std::to_string(config.l);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", config.beta);
    P.metadata["beta"] = buf;
    P.metadata["extension"] = to_string(config.extension);
    if (bs.chain) P.metadata["chain"] = chain_summary(*bs.chain);
    P.validate();
    return R;
}

CertificateSet recover(const Relaxation& R, const BlockMatrices& blocks, const Eigen::VectorXd& free_values) {
    const DynamicalSystem& sys = R.system;
    const std::size_t n = sys.dim();
    if (blocks.size() != R.problem.psd_blocks.size() ||
        static_cast<std::size_t>(free_values.size()) != R.problem.free_vars.size())
        throw std::invalid_argument("solution does not match the relaxation's variables");

    CertificateSet cs;
    cs.v = Polynomial(n);
    cs.w = Polynomial(n);
    double max_coef = 0.0;
    const std::size_t nv = R.v_exponents.size();
    for (std::size_t k = 0; k < nv; ++k) {
        const double c = free_values[static_cast<Eigen::Index>(k)];
        cs.v.add_term(R.v_exponents[k], c);
        max_coef = std::max(max_coef, std::abs(c));
    }
    for (std::size_t k = 0; k < R.w_exponents.size(); ++k) {
        const double c = free_values[static_cast<Eigen::Index>(nv + k)];
        cs.w.add_term(R.w_exponents[k], c);
        max_coef = std::max(max_coef, std::abs(c));
        cs.objective += c * box_moment(R.w_exponents[k], R.box);
    }

    const std::size_t m1 = sys.num_constraints() + 1;
    std::vector<Polynomial> fam[3];
    for (auto& f : fam) f.assign(m1, Polynomial(n));
    cs.min_gram_eigenvalue = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const BlockOrigin& o = R.origins[k];
        const Eigen::MatrixXd Q = 0.5 * (blocks[k] + blocks[k].transpose());
        cs.gram_blocks[R.problem.psd_blocks[k].label] = Q;
        max_coef = std::max(max_coef, Q.cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
        const double lam = es.eigenvalues().minCoeff() / (1.0 + Q.norm());
        cs.min_gram_eigenvalue = first ? lam : std::min(cs.min_gram_eigenvalue, lam);
        first = false;
        Polynomial& target = fam[static_cast<int>(o.family)][o.j];
        for (std::size_t r = 0; r < o.monomials.size(); ++r)
            for (std::size_t c = 0; c < o.monomials.size(); ++c)
                target.add_term(o.monomials[r] + o.monomials[c], Q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }

    auto weighted = [&](const std::vector<Polynomial>& certs) {
        Polynomial s(n);
        for (std::size_t j = 0; j < m1; ++j) s = s + certs[j] * sys.constraint_with_unit(j);
        return s;
    };
    const Polynomial r1 = lie_polynomial(cs.v, sys, R.config.beta) - weighted(fam[0]);
    const Polynomial r2 = cs.w - weighted(fam[1]);
    const Polynomial r3 = cs.w - cs.v - Polynomial::constant(n, 1.0) - weighted(fam[2]);
    for (const Polynomial* r : {&r1, &r2, &r3})
        for (const auto& [alpha, c] : r->terms()) cs.max_residual = std::max(cs.max_residual, std::abs(c));
    cs.residual_bound = 1e-6 * (1.0 + max_coef);
    cs.residual_ok = cs.max_residual <= cs.residual_bound;
    return cs;
}

CertificateSet recover(const Relaxation& relax, const SdpSolution& solution) {
    return recover(relax, solution.block_values, solution.free_values);
}

Eigen::VectorXd eval_batch(const Polynomial& p, const Eigen::MatrixXd& points) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto count = static_cast<std::size_t>(points.cols());
    if (n != p.dim()) throw std::invalid_argument("eval_batch: point dimension mismatch");
    // powers[i][k] = x_i^k for every point, built lazily up to the needed degree
    std::vector<std::vector<std::vector<double>>> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
        powers[i].push_back(std::vector<double>(count, 1.0));
        std::vector<double> xi(count);
        for (std::size_t t = 0; t < count; ++t) xi[t] = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
        powers[i].push_back(std::move(xi));
    }
    auto power = [&](std::size_t i, int k) -> const std::vector<double>& {
        while (static_cast<int>(powers[i].size()) <= k) {
            std::vector<double> next = powers[i].back();
            kernels::hadamard(powers[i][1].data(), next.data(), count);
            powers[i].push_back(std::move(next));
        }
        return powers[i][static_cast<std::size_t>(k)];
    };
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
    std::vector<double> term(count);
    for (const auto& [alpha, coef] : p.terms()) {
        std::fill(term.begin(), term.end(), 1.0);
        for (std::size_t i = 0; i < n; ++i)
            if (alpha[i] > 0) kernels::hadamard(power(i, alpha[i]).data(), term.data(), count);
        kernels::axpy(coef, term.data(), acc.data(), count);
    }
    return acc;
}

std::vector<GridPoint> outer_approx_grid(const Polynomial& w, const Box& box, const std::vector<int>& resolution) {
    const std::size_t n = w.dim();
    box.validate(n);
    if (resolution.size() != n) throw std::invalid_argument("grid resolution needs one count per variable");
    std::size_t total = 1;
    for (int r : resolution) {
        if (r < 2) throw std::invalid_argument("grid resolution must be at least 2 per axis");
        total *= static_cast<std::size_t>(r);
    }
    auto coord = [&](std::size_t i, int k) {
        if (k == resolution[i] - 1) return box.hi[i];
        return box.lo[i] + (box.hi[i] - box.lo[i]) * k / (resolution[i] - 1);
    };
    std::vector<GridPoint> out;
    const std::size_t chunk = 4096;
    std::vector<int> idx(n, 0);
    for (std::size_t start = 0; start < total; start += chunk) {
        const std::size_t cnt = std::min(chunk, total - start);
        Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cnt));
        for (std::size_t t = 0; t < cnt; ++t) {
            for (std::size_t i = 0; i < n; ++i)
                pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = coord(i, idx[i]);
            // odometer, last axis fastest
            for (std::size_t i = n; i-- > 0;) {
                if (++idx[i] < resolution[i]) break;
                idx[i] = 0;
            }
        }
        const Eigen::VectorXd vals = eval_batch(w, pts);
        for (std::size_t t = 0; t < cnt; ++t) {
            if (vals[static_cast<Eigen::Index>(t)] >= 1.0) {
                GridPoint g;
                g.x.resize(n);
                for (std::size_t i = 0; i < n; ++i) g.x[i] = pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
                g.w = vals[static_cast<Eigen::Index>(t)];
                out.push_back(std::move(g));
            }
        }
    }
    return out;
}

void write_grid_csv(std::ostream& os, const std::vector<GridPoint>& pts, const std::vector<std::string>& variables) {
    for (const auto& v : variables) os << v << ',';
    os << "w\n";
    char buf[40];
    for (const auto& g : pts) {
        for (double x : g.x) {
            std::snprintf(buf, sizeof buf, "%.10g", x);
            os << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.10g", g.w);
        os << buf << '\n';
    }
}

}  // namespace tsdyn
