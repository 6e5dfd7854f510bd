#include "slskit/qp.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

namespace slskit {

// ---------------------------------------------------------------------------
// VariableRegistry
// ---------------------------------------------------------------------------

int VariableRegistry::add_block(const std::string& name, int rows, int cols, int start,
                                int horizon) {
    if (finalized_) {
        throw InvalidArgument("VariableRegistry: cannot add blocks after finalize");
    }
    if (rows <= 0 || cols <= 0) {
        throw InvalidArgument("VariableRegistry: block dimensions must be positive");
    }
    if (start != 0 && start != 1) {
        throw InvalidArgument("VariableRegistry: start index must be 0 or 1");
    }
    if (horizon < start) {
        throw InvalidArgument("VariableRegistry: horizon must be >= start");
    }
    if (block_id(name) >= 0) {
        throw InvalidArgument("VariableRegistry: duplicate block name '" + name + "'");
    }
    blocks_.push_back(Block{name, rows, cols, start, horizon});
    masks_.emplace_back(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        rows, cols, true));
    return static_cast<int>(blocks_.size()) - 1;
}

void VariableRegistry::set_mask(
    int block, const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
    if (finalized_) {
        throw InvalidArgument("VariableRegistry: cannot set masks after finalize");
    }
    const Block& b = blocks_.at(static_cast<size_t>(block));
    if (mask.rows() != b.rows || mask.cols() != b.cols) {
        throw DimensionMismatch("VariableRegistry: mask shape does not match block '" +
                                b.name + "'");
    }
    masks_[static_cast<size_t>(block)] = masks_[static_cast<size_t>(block)] && mask;
}

void VariableRegistry::finalize() {
    if (finalized_) {
        return;
    }
    coord_.resize(blocks_.size());
    int next = 0;
    for (size_t b = 0; b < blocks_.size(); ++b) {
        const Block& blk = blocks_[b];
        const int per_tau = blk.rows * blk.cols;
        const int ntau = blk.horizon - blk.start + 1;
        coord_[b].assign(static_cast<size_t>(per_tau) * ntau, -1);
        for (int tau = 0; tau < ntau; ++tau) {
            for (int i = 0; i < blk.rows; ++i) {
                for (int j = 0; j < blk.cols; ++j) {
                    if (masks_[b](i, j)) {
                        coord_[b][static_cast<size_t>(tau * per_tau + i * blk.cols + j)] =
                            next++;
                    }
                }
            }
        }
    }
    size_ = next;
    finalized_ = true;
}

int VariableRegistry::size() const {
    if (!finalized_) {
        throw InvalidArgument("VariableRegistry: not finalized");
    }
    return size_;
}

int VariableRegistry::block_id(const std::string& name) const {
    for (size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].name == name) {
            return static_cast<int>(b);
        }
    }
    return -1;
}

int VariableRegistry::index(int block, int tau, int i, int j) const {
    if (!finalized_) {
        throw InvalidArgument("VariableRegistry: not finalized");
    }
    const Block& blk = blocks_.at(static_cast<size_t>(block));
    if (tau < blk.start || tau > blk.horizon || i < 0 || i >= blk.rows || j < 0 ||
        j >= blk.cols) {
        throw InvalidArgument("VariableRegistry: entry (" + blk.name + ", " +
                              std::to_string(tau) + ", " + std::to_string(i) + ", " +
                              std::to_string(j) + ") out of range");
    }
    const int per_tau = blk.rows * blk.cols;
    return coord_[static_cast<size_t>(block)]
                 [static_cast<size_t>((tau - blk.start) * per_tau + i * blk.cols + j)];
}

FirTransferMatrix VariableRegistry::unflatten_block(int block, const Vector& phi) const {
    const Block& blk = blocks_.at(static_cast<size_t>(block));
    FirTransferMatrix out(blk.rows, blk.cols, blk.start, blk.horizon);
    for (int tau = blk.start; tau <= blk.horizon; ++tau) {
        for (int i = 0; i < blk.rows; ++i) {
            for (int j = 0; j < blk.cols; ++j) {
                const int k = index(block, tau, i, j);
                if (k >= 0) {
                    out.at(tau)(i, j) = phi(k);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ConvexProgram
// ---------------------------------------------------------------------------

double ConvexProgram::smooth_objective(const Vector& phi) const {
    return 0.5 * phi.dot(Q * phi) + q.dot(phi) + c0;
}

double ConvexProgram::objective(const Vector& phi) const {
    double v = smooth_objective(phi);
    for (const auto& t : l1) {
        double r = 0.0;
        for (const auto& [idx, c] : t.coeffs) {
            r += c * phi(idx);
        }
        v += t.weight * std::abs(r);
    }
    return v;
}

// ---------------------------------------------------------------------------
// KKT solver
// ---------------------------------------------------------------------------

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kStationarityTol = 1e-7;
constexpr double kRegularization = 1e-10;
constexpr double kInfeasibleTol = 1e-6;
constexpr int kMaxRefinement = 30;

struct KktResiduals {
    double primal = std::numeric_limits<double>::infinity();
    double stationarity = std::numeric_limits<double>::infinity();
    double worst() const { return std::max(primal, stationarity); }
    bool accepted() const { return primal <= kPrimalTol && stationarity <= kStationarityTol; }
};

// Factors the KKT system [Q E'; E 0] once and solves it for several right
// hand sides. A singular exact system (redundant equalities, flat objective
// directions) falls back to the regularized form
//   [Q + dI, E'; E, -dI],  d = 1e-10,
// refined iteratively against the exact system; small problems get a dense
// factorization, with a complete orthogonal decomposition as the last resort.
class KktSolver {
  public:
    KktSolver(const SparseMatrix& Q, const SparseMatrix& E)
        : n_(static_cast<int>(Q.rows())), m_(static_cast<int>(E.rows())) {
        const int dim = n_ + m_;
        std::vector<Triplet> trips;
        trips.reserve(static_cast<size_t>(Q.nonZeros() + 2 * E.nonZeros()));
        for (int k = 0; k < Q.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(Q, k); it; ++it) {
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value());
            }
        }
        for (int k = 0; k < E.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(E, k); it; ++it) {
                const int r = static_cast<int>(it.row());
                const int c = static_cast<int>(it.col());
                trips.emplace_back(n_ + r, c, it.value());
                trips.emplace_back(c, n_ + r, it.value());
            }
        }
        kkt_.resize(dim, dim);
        kkt_.setFromTriplets(trips.begin(), trips.end());
        kkt_.makeCompressed();

        dense_mode_ = dim <= 1500 || (m_ == 0 && dim <= 3500);
        if (dense_mode_) {
            kkt_dense_ = Matrix(kkt_);
        }
    }

    // Returns [phi; nu] with the residuals achieved; never throws on
    // non-convergence -- the caller judges the residuals.
    Vector solve(const Vector& rhs, KktResiduals& res, QpSolveInfo& info) {
        Vector x = plain_solve(rhs);
        res = residuals(x, rhs);
        if (res.accepted()) {
            return x;
        }
        // Regularized fallback plus refinement.
        info.regularized = true;
        Vector best = x;
        KktResiduals best_res = res;
        if (factor_regularized()) {
            Vector y = reg_solve(rhs);
            KktResiduals r = residuals(y, rhs);
            if (!y.allFinite()) {
                r.primal = r.stationarity = std::numeric_limits<double>::infinity();
            }
            if (r.worst() < best_res.worst()) {
                best = y;
                best_res = r;
            }
            for (int it = 0; it < kMaxRefinement && !best_res.accepted(); ++it) {
                const Vector correction = reg_solve(rhs - kkt_ * best);
                if (!correction.allFinite()) {
                    break;
                }
                Vector refined = best + correction;
                KktResiduals r2 = residuals(refined, rhs);
                if (r2.worst() >= best_res.worst()) {
                    break;
                }
                best = refined;
                best_res = r2;
                info.refinement_steps = it + 1;
            }
        }
        if (!best_res.accepted() && dense_mode_) {
            // Minimum-norm least-squares on the exact KKT system.
            Vector y = kkt_dense_.completeOrthogonalDecomposition().solve(rhs);
            KktResiduals r = residuals(y, rhs);
            if (y.allFinite() && r.worst() < best_res.worst()) {
                best = y;
                best_res = r;
            }
        }
        res = best_res;
        return best;
    }

    KktResiduals residuals(const Vector& x, const Vector& rhs) const {
        KktResiduals r;
        if (!x.allFinite()) {
            return r;
        }
        const Vector d = kkt_ * x - rhs;
        r.stationarity = n_ > 0 ? d.head(n_).cwiseAbs().maxCoeff() : 0.0;
        r.primal = m_ > 0 ? d.tail(m_).cwiseAbs().maxCoeff() : 0.0;
        return r;
    }

  private:
    Vector plain_solve(const Vector& rhs) {
        if (dense_mode_) {
            if (!dense_lu_) {
                dense_lu_ = std::make_unique<Eigen::PartialPivLU<Matrix>>(kkt_dense_);
            }
            return dense_lu_->solve(rhs);
        }
        if (!sparse_lu_) {
            sparse_lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
            sparse_lu_->compute(kkt_);
        }
        if (sparse_lu_->info() != Eigen::Success) {
            return Vector::Constant(n_ + m_, std::numeric_limits<double>::quiet_NaN());
        }
        return sparse_lu_->solve(rhs);
    }

    bool factor_regularized() {
        if (reg_ready_) {
            return reg_ok_;
        }
        reg_ready_ = true;
        SparseMatrix reg = kkt_;
        SparseMatrix ident(n_ + m_, n_ + m_);
        ident.setIdentity();
        for (int i = 0; i < n_ + m_; ++i) {
            ident.coeffRef(i, i) = i < n_ ? kRegularization : -kRegularization;
        }
        reg += ident;
        if (dense_mode_) {
            reg_dense_lu_ = std::make_unique<Eigen::PartialPivLU<Matrix>>(Matrix(reg));
            reg_ok_ = true;
        } else {
            reg_sparse_lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
            reg_sparse_lu_->compute(reg);
            reg_ok_ = reg_sparse_lu_->info() == Eigen::Success;
        }
        return reg_ok_;
    }

    Vector reg_solve(const Vector& rhs) const {
        if (dense_mode_) {
            return reg_dense_lu_->solve(rhs);
        }
        return reg_sparse_lu_->solve(rhs);
    }

    int n_, m_;
    SparseMatrix kkt_;
    Matrix kkt_dense_;
    bool dense_mode_ = false;
    std::unique_ptr<Eigen::PartialPivLU<Matrix>> dense_lu_;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix>> sparse_lu_;
    std::unique_ptr<Eigen::PartialPivLU<Matrix>> reg_dense_lu_;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix>> reg_sparse_lu_;
    bool reg_ready_ = false;
    bool reg_ok_ = false;
};

void validate_program(const ConvexProgram& p) {
    if (p.n <= 0) {
        throw InvalidArgument("ConvexProgram: no variables");
    }
    if (p.Q.rows() != p.n || p.Q.cols() != p.n) {
        throw DimensionMismatch("ConvexProgram: Q must be n x n");
    }
    if (p.q.size() != p.n) {
        throw DimensionMismatch("ConvexProgram: q must have length n");
    }
    if (p.E.rows() > 0 && p.E.cols() != p.n) {
        throw DimensionMismatch("ConvexProgram: E must have n columns");
    }
    if (p.e.size() != p.E.rows()) {
        throw DimensionMismatch("ConvexProgram: e must match the rows of E");
    }
    SparseMatrix asym = SparseMatrix(p.Q.transpose()) - p.Q;
    double worst = 0.0;
    for (int k = 0; k < asym.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(asym, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    const double scale = std::max(1.0, p.q.size() > 0 ? p.q.cwiseAbs().maxCoeff() : 0.0);
    if (worst > 1e-10 * scale) {
        throw InvalidArgument("ConvexProgram: Q is not symmetric");
    }
}

// Consistency of E phi = e judged by the residual of a least-squares solve.
double equality_ls_residual(const ConvexProgram& p) {
    if (p.m() == 0) {
        return 0.0;
    }
    Vector phi;
    if (p.n + p.m() <= 4000) {
        phi = Matrix(p.E).completeOrthogonalDecomposition().solve(p.e);
    } else {
        Eigen::LeastSquaresConjugateGradient<SparseMatrix> ls;
        ls.setMaxIterations(5000);
        ls.setTolerance(1e-13);
        ls.compute(p.E);
        phi = ls.solve(p.e);
    }
    return (p.E * phi - p.e).cwiseAbs().maxCoeff();
}

}  // namespace

QpSolution solve_qp(const ConvexProgram& p) {
    validate_program(p);
    KktSolver kkt(p.Q, p.E);
    Vector rhs(p.n + p.m());
    rhs.head(p.n) = -p.q;
    if (p.m() > 0) {
        rhs.tail(p.m()) = p.e;
    }

    QpSolution sol;
    KktResiduals res;
    const Vector x = kkt.solve(rhs, res, sol.info);
    sol.info.primal_residual = res.primal;
    sol.info.stationarity_residual = res.stationarity;
    if (!res.accepted()) {
        const double ls_res = equality_ls_residual(p);
        if (ls_res > kInfeasibleTol) {
            throw InfeasibleSynthesis("solve_qp: equality constraints are inconsistent",
                                      ls_res);
        }
        throw NumericalFailure(
            "solve_qp: could not reach the residual tolerances (primal " +
            std::to_string(res.primal) + ", stationarity " + std::to_string(res.stationarity) +
            ")");
    }
    sol.phi = x.head(p.n);
    sol.nu = p.m() > 0 ? Vector(x.tail(p.m())) : Vector();
    return sol;
}

AdmmSolution solve_admm(const ConvexProgram& p, const AdmmOptions& opts) {
    validate_program(p);
    if (opts.rho <= 0.0) {
        throw InvalidArgument("solve_admm: rho must be positive");
    }
    const int nl = static_cast<int>(p.l1.size());
    for (const auto& t : p.l1) {
        if (t.weight < 0.0) {
            throw InvalidArgument("solve_admm: l1 weights must be nonnegative");
        }
    }

    // R stacks the l1 rows; lambda holds their weights.
    SparseMatrix R(nl, p.n);
    Vector lambda(nl);
    {
        std::vector<Triplet> trips;
        for (int r = 0; r < nl; ++r) {
            lambda(r) = p.l1[static_cast<size_t>(r)].weight;
            for (const auto& [idx, c] : p.l1[static_cast<size_t>(r)].coeffs) {
                trips.emplace_back(r, idx, c);
            }
        }
        R.setFromTriplets(trips.begin(), trips.end());
    }

    SparseMatrix Qaug = p.Q + SparseMatrix(opts.rho * SparseMatrix(R.transpose()) * R);
    KktSolver kkt(Qaug, p.E);

    Vector z = Vector::Zero(nl);
    Vector u = Vector::Zero(nl);
    Vector phi = Vector::Zero(p.n);
    AdmmSolution out;
    Vector rhs(p.n + p.m());
    if (p.m() > 0) {
        rhs.tail(p.m()) = p.e;
    }

    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        rhs.head(p.n) = -(p.q + opts.rho * (R.transpose() * (u - z)));
        KktResiduals res;
        QpSolveInfo info;
        const Vector x = kkt.solve(rhs, res, info);
        phi = x.head(p.n);
        out.info = info;
        out.info.primal_residual = res.primal;
        out.info.stationarity_residual = res.stationarity;

        const Vector rphi = R * phi;
        const Vector z_prev = z;
        const Vector v = rphi + u;
        for (int r = 0; r < nl; ++r) {
            const double thr = lambda(r) / opts.rho;
            z(r) = std::copysign(std::max(std::abs(v(r)) - thr, 0.0), v(r));
        }
        u += rphi - z;

        out.primal_residual = nl > 0 ? (rphi - z).cwiseAbs().maxCoeff() : 0.0;
        out.dual_residual =
            nl > 0 ? opts.rho * (R.transpose() * (z - z_prev)).cwiseAbs().maxCoeff() : 0.0;
        const double scale_pri =
            nl > 0 ? std::max(rphi.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff()) : 0.0;
        const double scale_dual =
            nl > 0 ? opts.rho * (R.transpose() * u).cwiseAbs().maxCoeff() : 0.0;
        const double eps_pri = std::max(opts.eps_abs, opts.eps_rel * scale_pri);
        const double eps_dual = std::max(opts.eps_abs, opts.eps_rel * scale_dual);
        if (out.primal_residual <= eps_pri && out.dual_residual <= eps_dual) {
            out.converged = true;
            break;
        }
    }
    out.phi = phi;
    return out;
}

void dump_program(const ConvexProgram& p, std::ostream& os) {
    char buf[64];
    const auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "Q " << p.Q.nonZeros() << "\n";
    for (int k = 0; k < p.Q.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(p.Q, k); it; ++it) {
            os << it.row() << ' ' << it.col() << ' ' << fmt(it.value()) << "\n";
        }
    }
    os << "q " << p.q.size() << "\n";
    for (int i = 0; i < p.q.size(); ++i) {
        os << i << ' ' << fmt(p.q(i)) << "\n";
    }
    os << "E " << p.E.rows() << ' ' << p.E.cols() << ' ' << p.E.nonZeros() << "\n";
    for (int k = 0; k < p.E.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(p.E, k); it; ++it) {
            os << it.row() << ' ' << it.col() << ' ' << fmt(it.value()) << "\n";
        }
    }
    os << "e " << p.e.size() << "\n";
    for (int i = 0; i < p.e.size(); ++i) {
        os << i << ' ' << fmt(p.e(i)) << "\n";
    }
}

}  // namespace slskit
