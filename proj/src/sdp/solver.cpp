// Primal-dual interior-point method (HKM or NT direction, Mehrotra
// predictor-corrector) for block SDPs with free variables, run on the
// homogeneous self-dual embedding
//
//   A(X) + Bx = tau*b,  A*y + Z = tau*C,  B'y = tau*c,
//   <C, X> + c'x - b'y + kappa = 0,  X, Z >= 0,  tau, kappa >= 0,
//
// so problems whose optimal faces are unbounded still yield bounded iterates.
// With a scaling pair (P, Q) = (X, Z^-1) for HKM or (W, W) for NT, where
// W Z W = X, each direction solves the saddle system
//
//   M dy + B dx = h,  B' dy = r,   M_ij = <A_i, P A_j Q>
//
// twice with one factorization (residual part and dtau part); dtau then comes
// from the scalar gap equation. The saddle system is solved through
// M + rho*B*B' (positive definite when the constraint rows are independent)
// and a Schur complement on dx.
#include <Eigen/Cholesky>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "tsdyn/kernels.hpp"
#include "tsdyn/sdp.hpp"

namespace tsdyn {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LocalConstraint {
    Index global = 0;
    std::vector<SdpEntry> entries;
    std::vector<std::int32_t> gather_idx;  // into column-major n x n
    std::vector<double> gather_w;          // <A, S> = sum w * (S + S')[idx]
    std::vector<Index> cols;               // distinct rows/cols touched
};

struct BlockData {
    Index n = 0;
    std::vector<LocalConstraint> cons;
    MatrixXd C;
};

struct Workspace {
    Index m = 0;
    Index nf = 0;
    std::vector<BlockData> blocks;
    Eigen::SparseMatrix<double> B;  // m x nf
    VectorXd b;
    VectorXd c;
    VectorXd row_scale;
};

Workspace build_workspace(const SdpProblem& p) {
    Workspace ws;
    ws.m = static_cast<Index>(p.equalities.size());
    ws.nf = static_cast<Index>(p.free_vars.size());
    ws.b.resize(ws.m);
    ws.c = VectorXd::Zero(ws.nf);
    for (Index k = 0; k < ws.nf; ++k) ws.c[k] = p.objective_free[static_cast<std::size_t>(k)];
    ws.row_scale.resize(ws.m);

    ws.blocks.resize(p.psd_blocks.size());
    for (std::size_t k = 0; k < p.psd_blocks.size(); ++k) {
        ws.blocks[k].n = static_cast<Index>(p.psd_blocks[k].dim);
        ws.blocks[k].C = MatrixXd::Zero(ws.blocks[k].n, ws.blocks[k].n);
    }
    for (const auto& e : p.objective_entries) {
        ws.blocks[e.block].C(e.row, e.col) += e.value;
        if (e.row != e.col) ws.blocks[e.block].C(e.col, e.row) += e.value;
    }

    std::vector<Eigen::Triplet<double>> trips;
    for (Index i = 0; i < ws.m; ++i) {
        const auto& eq = p.equalities[static_cast<std::size_t>(i)];
        // equilibrate rows: largest coefficient becomes 1
        double amax = 0.0;
        for (const auto& e : eq.entries) amax = std::max(amax, std::abs(e.value));
        for (const auto& t : eq.free_terms) amax = std::max(amax, std::abs(t.value));
        const double s = amax > 0.0 ? 1.0 / amax : 1.0;
        ws.row_scale[i] = s;
        ws.b[i] = s * eq.rhs;
        for (const auto& t : eq.free_terms) trips.emplace_back(i, static_cast<Index>(t.var), s * t.value);
        // entries are sorted by block, so each block's slice is contiguous
        std::size_t a = 0;
        while (a < eq.entries.size()) {
            std::size_t z = a;
            while (z < eq.entries.size() && eq.entries[z].block == eq.entries[a].block) ++z;
            BlockData& bd = ws.blocks[eq.entries[a].block];
            LocalConstraint lc;
            lc.global = i;
            for (std::size_t t = a; t < z; ++t) {
                SdpEntry e = eq.entries[t];
                e.value *= s;
                lc.entries.push_back(e);
                lc.gather_idx.push_back(static_cast<std::int32_t>(e.row + e.col * bd.n));
                lc.gather_w.push_back(e.row == e.col ? 0.5 * e.value : e.value);
                lc.cols.push_back(e.row);
                lc.cols.push_back(e.col);
            }
            std::sort(lc.cols.begin(), lc.cols.end());
            lc.cols.erase(std::unique(lc.cols.begin(), lc.cols.end()), lc.cols.end());
            bd.cons.push_back(std::move(lc));
            a = z;
        }
    }
    ws.B.resize(ws.m, ws.nf);
    ws.B.setFromTriplets(trips.begin(), trips.end());
    return ws;
}

double gather_inner(const LocalConstraint& lc, const MatrixXd& S2) {
    return kernels::gather_dot(S2.data(), lc.gather_idx.data(), lc.gather_w.data(), lc.gather_idx.size());
}

// A(Y) for arbitrary (not necessarily symmetric) block matrices Y
VectorXd op_A(const Workspace& ws, const std::vector<MatrixXd>& Y) {
    VectorXd out = VectorXd::Zero(ws.m);
    for (std::size_t k = 0; k < ws.blocks.size(); ++k) {
        const MatrixXd S2 = Y[k] + Y[k].transpose();
        for (const auto& lc : ws.blocks[k].cons) out[lc.global] += gather_inner(lc, S2);
    }
    return out;
}

std::vector<MatrixXd> op_At(const Workspace& ws, const VectorXd& y) {
    std::vector<MatrixXd> out;
    out.reserve(ws.blocks.size());
    for (const auto& bd : ws.blocks) {
        MatrixXd S = MatrixXd::Zero(bd.n, bd.n);
        for (const auto& lc : bd.cons) {
            const double yi = y[lc.global];
            for (const auto& e : lc.entries) {
                S(e.row, e.col) += yi * e.value;
                if (e.row != e.col) S(e.col, e.row) += yi * e.value;
            }
        }
        out.push_back(std::move(S));
    }
    return out;
}

double inner(const std::vector<MatrixXd>& A, const std::vector<MatrixXd>& B) {
    double s = 0.0;
    for (std::size_t k = 0; k < A.size(); ++k)
        s += kernels::dot(A[k].data(), B[k].data(), static_cast<std::size_t>(A[k].size()));
    return s;
}

double sq_norm(const std::vector<MatrixXd>& A) { return inner(A, A); }

// Schur complement M_ij = <A_i, P A_j Q>, accumulated blockwise. Only the
// upper triangle is computed; for HKM (P = X, Q = Z^-1) this symmetrizes M.
void build_schur(const Workspace& ws, const std::vector<MatrixXd>& P, const std::vector<MatrixXd>& Q, MatrixXd& M) {
    M.setZero(ws.m, ws.m);
    for (std::size_t k = 0; k < ws.blocks.size(); ++k) {
        const BlockData& bd = ws.blocks[k];
        const MatrixXd& Pk = P[k];
        const MatrixXd& Qk = Q[k];
        MatrixXd XA, G, Gs;
        for (std::size_t a = 0; a < bd.cons.size(); ++a) {
            const LocalConstraint& lc = bd.cons[a];
            const Index q = static_cast<Index>(lc.cols.size());
            XA.setZero(bd.n, q);
            auto pos = [&](Index col) {
                return static_cast<Index>(std::lower_bound(lc.cols.begin(), lc.cols.end(), col) - lc.cols.begin());
            };
            for (const auto& e : lc.entries) {
                XA.col(pos(e.col)) += e.value * Pk.col(e.row);
                if (e.row != e.col) XA.col(pos(e.row)) += e.value * Pk.col(e.col);
            }
            MatrixXd Zrows(q, bd.n);
            for (Index t = 0; t < q; ++t) Zrows.row(t) = Qk.row(lc.cols[static_cast<std::size_t>(t)]);
            G.noalias() = XA * Zrows;
            Gs = G + G.transpose();
            for (std::size_t b2 = a; b2 < bd.cons.size(); ++b2) {
                const LocalConstraint& other = bd.cons[b2];
                M(lc.global, other.global) += gather_inner(other, Gs);
            }
        }
    }
    // only the upper triangle (global i <= j within a block's ascending list) was filled
    M.triangularView<Eigen::StrictlyLower>() = M.transpose().triangularView<Eigen::StrictlyLower>();
}

// Largest step in (0, 1] keeping S + alpha*dS positive definite, scaled by
// the fraction-to-boundary factor when the boundary is hit.
double step_length(const std::vector<MatrixXd>& S, const std::vector<MatrixXd>& dS, double fraction) {
    double alpha = 1.0;
    for (std::size_t k = 0; k < S.size(); ++k) {
        Eigen::LLT<MatrixXd> llt(S[k]);
        if (llt.info() != Eigen::Success) return 0.0;
        MatrixXd T = llt.matrixL().solve(dS[k]);
        T = llt.matrixL().solve(T.transpose().eval());
        T = 0.5 * (T + T.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        if (lmin < 0.0) alpha = std::min(alpha, -fraction / lmin);
    }
    return alpha;
}

class NewtonSolver {
public:
    NewtonSolver(const MatrixXd& M, const Eigen::SparseMatrix<double>& B) : M_(M), B_(B) {
        const Index m = M.rows();
        const Index nf = B.cols();
        MatrixXd Mt = M;
        if (nf > 0) {
            const MatrixXd BBt = MatrixXd(B * B.transpose());
            const double tb = BBt.trace();
            const double ref = M.trace() / static_cast<double>(m);
            rho_ = tb > 0.0 ? std::max(ref, 1e-300) / (tb / m) : 1.0;
            Mt += rho_ * BBt;
        }
        factor(Mt, llt_);
        if (nf > 0) {
            W_ = llt_.matrixL().solve(MatrixXd(B));
            MatrixXd K = W_.transpose() * W_;
            factor(K, kllt_);
        }
        (void)m;
    }

    // solve with a few rounds of iterative refinement on the saddle system
    void solve(const VectorXd& h, const VectorXd& rf, VectorXd& dy, VectorXd& dx) const {
        solve_once(h, rf, dy, dx);
        const double scale = h.norm() + rf.norm() + 1e-300;
        double prev = std::numeric_limits<double>::infinity();
        for (int round = 0; round < 10; ++round) {
            const VectorXd r1 = h - M_ * dy - (B_.cols() ? VectorXd(B_ * dx) : VectorXd::Zero(h.size()));
            const VectorXd r2 = B_.cols() ? VectorXd(rf - B_.transpose() * dy) : VectorXd();
            const double res = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
            if (res <= 1e-15 * scale || res >= 0.9 * prev) break;
            prev = res;
            VectorXd cy, cx;
            solve_once(r1, r2, cy, cx);
            dy += cy;
            if (B_.cols()) dx += cx;
        }
    }

    double regularization() const { return reg_; }

private:
    void solve_once(const VectorXd& h, const VectorXd& rf, VectorXd& dy, VectorXd& dx) const {
        if (B_.cols() == 0) {
            dy = llt_.solve(h);
            dx.resize(0);
            return;
        }
        const VectorXd u = llt_.matrixL().solve(h + rho_ * (B_ * rf));
        dx = kllt_.solve(W_.transpose() * u - rf);
        dy = llt_.matrixU().solve(u - W_ * dx);
    }

    void factor(MatrixXd& A, Eigen::LLT<MatrixXd>& llt) {
        const double dmax = std::max(A.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        llt.compute(A);
        double delta = 1e-14;
        while (llt.info() != Eigen::Success) {
            if (delta > 1e-4) throw std::runtime_error("Schur complement is not positive definite");
            A.diagonal().array() += delta * dmax;
            reg_ = std::max(reg_, delta);
            llt.compute(A);
            delta *= 100.0;
        }
    }

    const MatrixXd& M_;
    const Eigen::SparseMatrix<double>& B_;
    double rho_ = 0.0;
    double reg_ = 0.0;
    Eigen::LLT<MatrixXd> llt_;
    Eigen::LLT<MatrixXd> kllt_;
    MatrixXd W_;
};

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opt) {
    problem.validate();
    const SdpProblem p = problem.normalized();
    const Workspace ws = build_workspace(p);
    const std::size_t K = ws.blocks.size();
    double N = 0.0;
    for (const auto& bd : ws.blocks) N += static_cast<double>(bd.n);

    std::vector<MatrixXd> Cb(K);
    for (std::size_t k = 0; k < K; ++k) Cb[k] = ws.blocks[k].C;

    // cold start; tau = 1 and kappa on the central path
    std::vector<MatrixXd> X(K), Z(K), Zinv(K), W(K);
    // NT scaling W = G G' with G' Z G = G^-1 X G^-T = diag(lam)
    std::vector<MatrixXd> G(K), Ginv(K);
    std::vector<VectorXd> lam(K);
    VectorXd x = VectorXd::Zero(ws.nf);
    VectorXd y = VectorXd::Zero(ws.m);
    for (std::size_t k = 0; k < K; ++k) {
        const BlockData& bd = ws.blocks[k];
        const double n = static_cast<double>(bd.n);
        double xi = std::max(10.0, std::sqrt(n));
        double eta = std::max({10.0, std::sqrt(n), bd.C.norm()});
        for (const auto& lc : bd.cons) {
            double blk_norm = 0.0;
            for (const auto& e : lc.entries) blk_norm += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
            blk_norm = std::sqrt(blk_norm);
            xi = std::max(xi, n * (1.0 + std::abs(ws.b[lc.global])) / (1.0 + blk_norm));
            eta = std::max(eta, blk_norm);
        }
        X[k] = xi * MatrixXd::Identity(bd.n, bd.n);
        Z[k] = eta * MatrixXd::Identity(bd.n, bd.n);
    }
    double tau = 1.0;
    double kappa = N > 0.0 ? inner(X, Z) / N : 1.0;
    const double kappa0 = kappa;

    const double b_norm = ws.b.norm();
    double c_norm2 = ws.c.squaredNorm();
    for (const auto& bd : ws.blocks) c_norm2 += bd.C.squaredNorm();
    const double c_norm = std::sqrt(c_norm2);

    std::vector<IterationLog> trace;
    MatrixXd M;

    // best iterate seen so far, by the worst of the three stopping measures
    struct Snapshot {
        std::vector<MatrixXd> X, Z;
        VectorXd x, y;
        double tau = 1.0;
        double merit = std::numeric_limits<double>::infinity();
        int iter = 0;
    } best;

    auto finish = [&](const Snapshot& s, SolveStatus provisional) {
        SdpSolution sol;
        const double inv = 1.0 / s.tau;
        const VectorXd y_orig = inv * s.y.cwiseProduct(ws.row_scale);
        sol.block_values = s.X;
        sol.dual_slacks = s.Z;
        for (auto& m : sol.block_values) m *= inv;
        for (auto& m : sol.dual_slacks) m *= inv;
        sol.free_values = inv * s.x;
        sol.multipliers = y_orig;
        sol.residuals = evaluate_residuals(p, sol.block_values, sol.free_values, y_orig, sol.dual_slacks);
        sol.objective = sol.residuals.primal_obj;
        sol.trace = trace;
        sol.iterations = trace.empty() ? 0 : trace.back().iter;
        const auto& r = sol.residuals;
        const double worst = std::max({r.primal_infeas, r.dual_infeas, r.gap});
        if (provisional == SolveStatus::infeasible_flag)
            sol.status = provisional;
        else if (worst <= opt.tol)
            sol.status = SolveStatus::optimal;
        else if (worst <= opt.near_tol)
            sol.status = SolveStatus::near_optimal;
        else
            sol.status = provisional;
        return sol;
    };
    auto current = [&]() { return Snapshot{X, Z, x, y, tau, 0.0, 0}; };
    // kappa/tau growing without bound certifies infeasibility of one side
    auto infeasible = [&]() { return tau < 1e-8 && kappa / kappa0 > 1e9 * tau; };

    for (int iter = 0; iter <= opt.max_iter; ++iter) {
        // residuals of the embedding
        const std::vector<MatrixXd> Aty = op_At(ws, y);
        std::vector<MatrixXd> Rd(K);
        for (std::size_t k = 0; k < K; ++k) Rd[k] = tau * Cb[k] - Z[k] - Aty[k];
        const VectorXd rp = tau * ws.b - op_A(ws, X) - ws.B * x;
        const VectorXd rf = tau * ws.c - ws.B.transpose() * y;
        const double pobj_h = ws.c.dot(x) + inner(Cb, X);
        const double dobj_h = ws.b.dot(y);
        const double rg = dobj_h - pobj_h - kappa;
        const double xz = inner(X, Z);
        const double mu = (xz + tau * kappa) / (N + 1.0);

        // stopping measures on the normalized iterate
        const double pobj = pobj_h / tau;
        const double dobj = dobj_h / tau;
        const double x_size = std::sqrt(sq_norm(X) + x.squaredNorm()) / tau;
        const double z_size = std::sqrt(sq_norm(Z)) / tau;
        IterationLog log;
        log.iter = iter;
        log.primal_obj = pobj;
        log.dual_obj = dobj;
        log.primal_infeas = rp.norm() / tau / (1.0 + b_norm + x_size);
        log.dual_infeas = std::sqrt(sq_norm(Rd) + rf.squaredNorm()) / tau / (1.0 + c_norm + z_size);
        log.gap = std::max(std::abs(pobj - dobj), xz / (tau * tau)) / (1.0 + std::abs(pobj) + std::abs(dobj));
        log.mu = mu;
        trace.push_back(log);
        if (opt.verbose && iter > 0) {
            const IterationLog& prev = trace[trace.size() - 2];
            std::fprintf(stderr, "%3d step %.2f %.2f\n", iter - 1, prev.step_primal, prev.step_dual);
        }
        if (opt.verbose)
            std::fprintf(stderr, "%3d pobj % .8e dobj % .8e pinf %.2e dinf %.2e gap %.2e mu %.2e tau %.2e kappa %.2e\n",
                         iter, pobj, dobj, log.primal_infeas, log.dual_infeas, log.gap, mu, tau, kappa);

        const double merit = std::max({log.primal_infeas, log.dual_infeas, log.gap});
        if (merit < best.merit) {
            best = current();
            best.merit = merit;
            best.iter = iter;
        }
        if (merit <= opt.tol) {
            // confirm on the unscaled problem; otherwise keep iterating
            SdpSolution trial = finish(best, SolveStatus::max_iter);
            if (trial.status == SolveStatus::optimal) return trial;
        }
        if (infeasible()) return finish(current(), SolveStatus::infeasible_flag);
        if (iter == opt.max_iter) break;
        // no progress for a while: the iterates have stalled numerically
        if (iter - best.iter >= 20) break;

        // scaling matrices
        bool ok = true;
        for (std::size_t k = 0; k < K; ++k) {
            const Index n = ws.blocks[k].n;
            Eigen::LLT<MatrixXd> lz(Z[k]);
            Eigen::LLT<MatrixXd> lx(X[k]);
            if (lz.info() != Eigen::Success || lx.info() != Eigen::Success) {
                ok = false;
                break;
            }
            Zinv[k] = lz.solve(MatrixXd::Identity(n, n));
            Zinv[k] = 0.5 * (Zinv[k] + Zinv[k].transpose()).eval();
            if (opt.direction == SearchDirection::nt) {
                const MatrixXd L = lx.matrixL();
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(L.transpose() * Z[k] * L);
                if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
                    ok = false;
                    break;
                }
                const VectorXd d4 = es.eigenvalues().cwiseSqrt().cwiseSqrt();
                G[k].noalias() = L * es.eigenvectors() * d4.cwiseInverse().asDiagonal();
                Ginv[k] = d4.asDiagonal() * es.eigenvectors().transpose() * lx.matrixL().solve(MatrixXd::Identity(n, n));
                lam[k] = es.eigenvalues().cwiseSqrt();
                W[k].noalias() = G[k] * G[k].transpose();
                W[k] = 0.5 * (W[k] + W[k].transpose()).eval();
            }
        }
        if (!ok) break;
        const bool nt = opt.direction == SearchDirection::nt;
        const std::vector<MatrixXd>& P = nt ? W : X;
        const std::vector<MatrixXd>& Q = nt ? W : Zinv;
        build_schur(ws, P, Q, M);

        std::unique_ptr<NewtonSolver> newton;
        try {
            newton = std::make_unique<NewtonSolver>(M, ws.B);
        } catch (const std::runtime_error& e) {
            SdpSolution s = finish(best, SolveStatus::max_iter);
            if (s.status == SolveStatus::optimal || s.status == SolveStatus::near_optimal) return s;
            throw SolverError(std::string("numerical breakdown at iteration ") + std::to_string(iter) + ": " + e.what(),
                              trace);
        }

        std::vector<MatrixXd> PRdQ(K), PCQ(K);
        for (std::size_t k = 0; k < K; ++k) {
            PRdQ[k].noalias() = P[k] * Rd[k] * Q[k];
            PCQ[k].noalias() = P[k] * Cb[k] * Q[k];
        }
        const VectorXd A_PRdQ = op_A(ws, PRdQ);
        const double C_PRdQ = inner(Cb, PRdQ);
        const VectorXd u = op_A(ws, PCQ);
        const double g = inner(Cb, PCQ);

        // the part of (dy, dx) proportional to dtau
        VectorXd dy2, dx2;
        newton->solve(u + ws.b, ws.c, dy2, dx2);
        const double den = -g + u.dot(dy2) + ws.c.dot(dx2) - ws.b.dot(dy2) - kappa / tau;

        struct Direction {
            VectorXd dy, dx;
            std::vector<MatrixXd> dX, dZ;
            double dtau = 0.0, dkappa = 0.0;
        };
        // T is the complementarity target for dX + P dZ Q, rtk the one for
        // kappa*dtau + tau*dkappa; linear residuals shrink by the factor 1 - eta
        auto direction = [&](const std::vector<MatrixXd>& T, double eta, double rtk, Direction& D) {
            VectorXd dy1, dx1;
            newton->solve(eta * rp - op_A(ws, T) + eta * A_PRdQ, eta * rf, dy1, dx1);
            const double num = eta * rg - inner(Cb, T) + eta * C_PRdQ - u.dot(dy1) - ws.c.dot(dx1) + ws.b.dot(dy1) -
                               rtk / tau;
            D.dtau = num / den;
            D.dy = dy1 + D.dtau * dy2;
            D.dx = ws.nf ? VectorXd(dx1 + D.dtau * dx2) : VectorXd();
            D.dkappa = (rtk - kappa * D.dtau) / tau;
            const std::vector<MatrixXd> Atdy = op_At(ws, D.dy);
            D.dX.resize(K);
            D.dZ.resize(K);
            for (std::size_t k = 0; k < K; ++k) {
                D.dZ[k] = eta * Rd[k] - Atdy[k] + D.dtau * Cb[k];
                MatrixXd S = T[k] - P[k] * D.dZ[k] * Q[k];
                D.dX[k] = 0.5 * (S + S.transpose());
            }
        };
        auto max_step = [&](const Direction& D, double fraction) {
            double a = std::min(step_length(X, D.dX, fraction), step_length(Z, D.dZ, fraction));
            if (D.dtau < 0.0) a = std::min(a, -fraction * tau / D.dtau);
            if (D.dkappa < 0.0) a = std::min(a, -fraction * kappa / D.dkappa);
            return a;
        };

        // predictor
        std::vector<MatrixXd> T(K);
        for (std::size_t k = 0; k < K; ++k) T[k] = -X[k];
        Direction D;
        direction(T, 1.0, -tau * kappa, D);
        const double a_aff = max_step(D, 1.0);
        double xz_aff = 0.0;
        for (std::size_t k = 0; k < K; ++k) xz_aff += (X[k] + a_aff * D.dX[k]).cwiseProduct(Z[k] + a_aff * D.dZ[k]).sum();
        xz_aff += (tau + a_aff * D.dtau) * (kappa + a_aff * D.dkappa);
        // short predictor steps mean poor centrality: center harder and step more cautiously
        const double expon = std::max(1.0, 3.0 * a_aff * a_aff);
        const double sigma =
            std::clamp(std::pow(std::max(xz_aff, 0.0) / std::max(xz + tau * kappa, 1e-300), expon), 0.0, 1.0);

        // corrector
        for (std::size_t k = 0; k < K; ++k) {
            if (nt) {
                // second-order term in the scaled space, mapped back through G
                const MatrixXd dXs = Ginv[k] * D.dX[k] * Ginv[k].transpose();
                const MatrixXd dZs = G[k].transpose() * D.dZ[k] * G[k];
                MatrixXd R = dXs * dZs;
                R = 0.5 * (R + R.transpose()).eval();
                const Index n = R.rows();
                for (Index j = 0; j < n; ++j)
                    for (Index i = 0; i < n; ++i) R(i, j) *= 2.0 / (lam[k](i) + lam[k](j));
                T[k] = sigma * mu * Zinv[k] - X[k] - G[k] * R * G[k].transpose();
            } else {
                const MatrixXd S = D.dX[k] * D.dZ[k] * Zinv[k];
                T[k] = sigma * mu * Zinv[k] - X[k] - 0.5 * (S + S.transpose());
            }
            T[k] = 0.5 * (T[k] + T[k].transpose()).eval();
        }
        const double rtk = sigma * mu - tau * kappa - D.dtau * D.dkappa;
        direction(T, 1.0 - sigma, rtk, D);
        const double fraction = std::min(opt.step_fraction, 0.9 + 0.09 * a_aff);
        const double a = max_step(D, fraction);
        trace.back().step_primal = a;
        trace.back().step_dual = a;
        if (!std::isfinite(a) || D.dy.hasNaN() || a < 1e-10) break;

        for (std::size_t k = 0; k < K; ++k) {
            X[k] += a * D.dX[k];
            Z[k] += a * D.dZ[k];
        }
        x += a * D.dx;
        y += a * D.dy;
        tau += a * D.dtau;
        kappa += a * D.dkappa;
    }
    if (infeasible()) return finish(current(), SolveStatus::infeasible_flag);
    return finish(best, SolveStatus::max_iter);
}

}  // namespace tsdyn
