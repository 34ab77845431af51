#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <tuple>

#include "tsdyn/sdp.hpp"

namespace tsdyn {

namespace {

bool entry_less(const SdpEntry& a, const SdpEntry& b) {
    return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
}

std::vector<SdpEntry> canonical_entries(std::vector<SdpEntry> v) {
    std::sort(v.begin(), v.end(), entry_less);
    std::vector<SdpEntry> out;
    for (const auto& e : v) {
        if (!out.empty() && !entry_less(out.back(), e)) {
            out.back().value += e.value;
        } else {
            out.push_back(e);
        }
    }
    std::erase_if(out, [](const SdpEntry& e) { return e.value == 0.0; });
    return out;
}

std::vector<FreeTerm> canonical_free(std::vector<FreeTerm> v) {
    std::sort(v.begin(), v.end(), [](const FreeTerm& a, const FreeTerm& b) { return a.var < b.var; });
    std::vector<FreeTerm> out;
    for (const auto& t : v) {
        if (!out.empty() && out.back().var == t.var)
            out.back().value += t.value;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const FreeTerm& t) { return t.value == 0.0; });
    return out;
}

double inner_entry(const SdpEntry& e, const Eigen::MatrixXd& X) {
    return e.row == e.col ? e.value * X(e.row, e.col) : e.value * (X(e.row, e.col) + X(e.col, e.row));
}

}  // namespace

std::size_t SdpProblem::num_gram_scalars() const {
    std::size_t total = 0;
    for (const auto& b : psd_blocks) total += b.dim * (b.dim + 1) / 2;
    return total;
}

void SdpProblem::validate() const {
    auto check_entry = [&](const SdpEntry& e, const std::string& where) {
        if (e.block >= psd_blocks.size())
            throw std::invalid_argument(where + ": block index " + std::to_string(e.block) + " out of range");
        const std::size_t n = psd_blocks[e.block].dim;
        if (e.row > e.col) throw std::invalid_argument(where + ": entry with row > col");
        if (e.col >= n) throw std::invalid_argument(where + ": entry outside block '" + psd_blocks[e.block].label + "'");
        if (!std::isfinite(e.value)) throw std::invalid_argument(where + ": non-finite coefficient");
    };
    for (const auto& b : psd_blocks)
        if (b.dim == 0) throw std::invalid_argument("PSD block '" + b.label + "' has dimension 0");
    for (std::size_t i = 0; i < equalities.size(); ++i) {
        const auto& eq = equalities[i];
        const std::string where = "equality " + std::to_string(i) + (eq.label.empty() ? "" : " (" + eq.label + ")");
        for (const auto& e : eq.entries) check_entry(e, where);
        for (const auto& t : eq.free_terms) {
            if (t.var >= free_vars.size()) throw std::invalid_argument(where + ": free variable index out of range");
            if (!std::isfinite(t.value)) throw std::invalid_argument(where + ": non-finite coefficient");
        }
        if (!std::isfinite(eq.rhs)) throw std::invalid_argument(where + ": non-finite right-hand side");
    }
    for (const auto& e : objective_entries) check_entry(e, "objective");
    if (!objective_free.empty() && objective_free.size() != free_vars.size())
        throw std::invalid_argument("objective has " + std::to_string(objective_free.size()) +
                                    " free coefficients for " + std::to_string(free_vars.size()) + " free variables");
}

SdpProblem SdpProblem::normalized() const {
    SdpProblem out = *this;
    for (auto& eq : out.equalities) {
        eq.entries = canonical_entries(std::move(eq.entries));
        eq.free_terms = canonical_free(std::move(eq.free_terms));
    }
    out.objective_entries = canonical_entries(std::move(out.objective_entries));
    if (out.objective_free.empty()) out.objective_free.assign(out.free_vars.size(), 0.0);
    return out;
}

Eigen::VectorXd apply_constraints(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(p.equalities.size()));
    for (std::size_t i = 0; i < p.equalities.size(); ++i) {
        double s = 0.0;
        for (const auto& e : p.equalities[i].entries) s += inner_entry(e, X[e.block]);
        for (const auto& t : p.equalities[i].free_terms) s += t.value * x[t.var];
        out[static_cast<Eigen::Index>(i)] = s;
    }
    return out;
}

BlockMatrices apply_adjoint(const SdpProblem& p, const Eigen::VectorXd& y) {
    BlockMatrices out;
    for (const auto& b : p.psd_blocks) {
        const auto n = static_cast<Eigen::Index>(b.dim);
        out.push_back(Eigen::MatrixXd::Zero(n, n));
    }
    for (std::size_t i = 0; i < p.equalities.size(); ++i) {
        const double yi = y[static_cast<Eigen::Index>(i)];
        for (const auto& e : p.equalities[i].entries) {
            out[e.block](e.row, e.col) += yi * e.value;
            if (e.row != e.col) out[e.block](e.col, e.row) += yi * e.value;
        }
    }
    return out;
}

double primal_objective(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x) {
    double s = 0.0;
    for (const auto& e : p.objective_entries) s += inner_entry(e, X[e.block]);
    for (std::size_t k = 0; k < p.objective_free.size(); ++k) s += p.objective_free[k] * x[static_cast<Eigen::Index>(k)];
    return s;
}

std::string problem_digest(const SdpProblem& p) {
    std::ostringstream os;
    std::size_t nnz = 0;
    for (const auto& eq : p.equalities) nnz += eq.entries.size() + eq.free_terms.size();
    os << "blocks " << p.psd_blocks.size() << '\n';
    os << "free " << p.free_vars.size() << '\n';
    os << "equalities " << p.equalities.size() << '\n';
    os << "gram_scalars " << p.num_gram_scalars() << '\n';
    os << "nonzeros " << nnz << '\n';
    // group block sizes by label prefix (the part before '#')
    std::map<std::string, std::vector<std::size_t>> groups;
    for (const auto& b : p.psd_blocks) groups[b.label.substr(0, b.label.find('#'))].push_back(b.dim);
    for (auto& [name, sizes] : groups) {
        std::sort(sizes.rbegin(), sizes.rend());
        os << "block_sizes " << name << ':';
        for (auto s : sizes) os << ' ' << s;
        os << '\n';
    }
    return os.str();
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::near_optimal: return "near_optimal";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::infeasible_flag: return "infeasible_flag";
    }
    return "?";
}

SdpResiduals evaluate_residuals(const SdpProblem& p, const BlockMatrices& X, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& y, const BlockMatrices& Z) {
    SdpResiduals r;
    const auto m = static_cast<Eigen::Index>(p.equalities.size());
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) b[i] = p.equalities[static_cast<std::size_t>(i)].rhs;
    const Eigen::VectorXd rp = b - apply_constraints(p, X, x);
    double x_size2 = x.squaredNorm(), z_size2 = 0.0;
    for (std::size_t k = 0; k < X.size(); ++k) {
        x_size2 += X[k].squaredNorm();
        z_size2 += Z[k].squaredNorm();
    }
    r.primal_infeas = rp.norm() / (1.0 + b.norm() + std::sqrt(x_size2));

    BlockMatrices C;
    for (const auto& blk : p.psd_blocks) {
        const auto n = static_cast<Eigen::Index>(blk.dim);
        C.push_back(Eigen::MatrixXd::Zero(n, n));
    }
    for (const auto& e : p.objective_entries) {
        C[e.block](e.row, e.col) += e.value;
        if (e.row != e.col) C[e.block](e.col, e.row) += e.value;
    }
    const BlockMatrices Aty = apply_adjoint(p, y);
    double rd2 = 0.0, c2 = 0.0, xz = 0.0;
    r.min_eig_x = r.min_eig_z = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < C.size(); ++k) {
        rd2 += (C[k] - Z[k] - Aty[k]).squaredNorm();
        c2 += C[k].squaredNorm();
        xz += X[k].cwiseProduct(Z[k]).sum();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(X[k], Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ez(Z[k], Eigen::EigenvaluesOnly);
        const double lx = ex.eigenvalues().minCoeff() / (1.0 + X[k].norm());
        const double lz = ez.eigenvalues().minCoeff() / (1.0 + Z[k].norm());
        r.min_eig_x = first ? lx : std::min(r.min_eig_x, lx);
        r.min_eig_z = first ? lz : std::min(r.min_eig_z, lz);
        first = false;
    }
    Eigen::VectorXd Bty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.free_vars.size()));
    for (std::size_t i = 0; i < p.equalities.size(); ++i)
        for (const auto& t : p.equalities[i].free_terms) Bty[t.var] += t.value * y[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < p.free_vars.size(); ++k) {
        const double ck = p.objective_free.empty() ? 0.0 : p.objective_free[k];
        const double rf = ck - Bty[static_cast<Eigen::Index>(k)];
        rd2 += rf * rf;
        c2 += ck * ck;
    }
    r.dual_infeas = std::sqrt(rd2) / (1.0 + std::sqrt(c2) + std::sqrt(z_size2));
    r.primal_obj = primal_objective(p, X, x);
    r.dual_obj = b.dot(y);
    const double scale = 1.0 + std::abs(r.primal_obj) + std::abs(r.dual_obj);
    r.gap = std::abs(r.primal_obj - r.dual_obj) / scale;
    r.complementarity = xz / scale;
    return r;
}

double SdpSolution::free_value(const SdpProblem& p, const std::string& label) const {
    for (std::size_t k = 0; k < p.free_vars.size(); ++k)
        if (p.free_vars[k] == label) return free_values[static_cast<Eigen::Index>(k)];
    throw std::out_of_range("no free variable named '" + label + "'");
}

void write_solution(std::ostream& os, const SdpProblem& p, const SdpSolution& s) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "objective " << num(s.objective) << '\n';
    os << "status " << to_string(s.status) << '\n';
    os << "iterations " << s.iterations << '\n';
    os << "primal_obj " << num(s.residuals.primal_obj) << '\n';
    os << "dual_obj " << num(s.residuals.dual_obj) << '\n';
    os << "primal_infeas " << num(s.residuals.primal_infeas) << '\n';
    os << "dual_infeas " << num(s.residuals.dual_infeas) << '\n';
    os << "gap " << num(s.residuals.gap) << '\n';
    for (std::size_t k = 0; k < s.block_values.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.block_values[k], Eigen::EigenvaluesOnly);
        os << "spectrum " << (k < p.psd_blocks.size() ? p.psd_blocks[k].label : std::to_string(k));
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) os << ' ' << num(es.eigenvalues()[i]);
        os << '\n';
    }
}

}  // namespace tsdyn
