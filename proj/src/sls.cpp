#include "slskit/sls.hpp"

#include <algorithm>
#include <cmath>

#include "slskit/errors.hpp"

namespace slskit {

// ---------------------------------------------------------------------------
// ObjectiveExpr
// ---------------------------------------------------------------------------

void ObjectiveExpr::add_squared_term(const std::vector<std::pair<int, double>>& lin,
                                     double weight) {
    // weight * (c . phi)^2 contributes 2 * weight * c c' to Q in the
    // 1/2 phi' Q phi convention.
    for (const auto& [i, ci] : lin) {
        for (const auto& [j, cj] : lin) {
            quad_.emplace_back(i, j, 2.0 * weight * ci * cj);
        }
    }
}

void ObjectiveExpr::add_l1(int coord, double weight) {
    L1Term t;
    t.weight = weight;
    t.coeffs = {{coord, 1.0}};
    l1_.push_back(std::move(t));
}

bool ObjectiveExpr::empty() const {
    return quad_.empty() && l1_.empty() && constant_ == 0.0 &&
           (linear_.size() == 0 || linear_.cwiseAbs().maxCoeff() == 0.0);
}

void ObjectiveExpr::scale(double alpha) {
    if (alpha < 0.0 && (!quad_.empty() || !l1_.empty())) {
        throw NonConvexObjective(
            "ObjectiveExpr: negative multiplier makes the accumulated objective nonconvex");
    }
    for (auto& t : quad_) {
        t = Triplet(t.row(), t.col(), t.value() * alpha);
    }
    linear_ *= alpha;
    constant_ *= alpha;
    for (auto& t : l1_) {
        t.weight *= alpha;
    }
}

double ObjectiveExpr::evaluate(const Vector& phi) const {
    double v = constant_ + linear_.dot(phi);
    for (const auto& t : quad_) {
        v += 0.5 * t.value() * phi(t.row()) * phi(t.col());
    }
    for (const auto& t : l1_) {
        double r = 0.0;
        for (const auto& [idx, c] : t.coeffs) {
            r += c * phi(idx);
        }
        v += t.weight * std::abs(r);
    }
    return v;
}

// ---------------------------------------------------------------------------
// SynthesisProblem
// ---------------------------------------------------------------------------

SynthesisProblem::SynthesisProblem(const LTISystem& system, int T, SlsMode mode)
    : system_(system), T_(T), mode_(mode) {
    if (T < 1) {
        throw InvalidArgument("SLS assembly: FIR horizon T must be >= 1");
    }
    const SystemDims d = system_.dims();
    if (d.nu == 0) {
        throw DimensionMismatch("SLS assembly: system has no actuators");
    }
    if (mode == SlsMode::StateFeedback) {
        registry_.add_block("phi_x", d.nx, d.nx, 1, T);
        registry_.add_block("phi_u", d.nu, d.nx, 1, T);
    } else {
        registry_.add_block("phi_xx", d.nx, d.nx, 1, T);
        registry_.add_block("phi_ux", d.nu, d.nx, 1, T);
        registry_.add_block("phi_xy", d.nx, d.ny, 1, T);
        registry_.add_block("phi_uy", d.nu, d.ny, 0, T);
    }
}

SynthesisProblem assemble_sf(const LTISystem& system, int T) {
    return SynthesisProblem(system, T, SlsMode::StateFeedback);
}

SynthesisProblem assemble_of(const LTISystem& system, int T) {
    return SynthesisProblem(system, T, SlsMode::OutputFeedback);
}

int SynthesisProblem::block(const std::string& name) const {
    const int b = registry_.block_id(name);
    if (b < 0) {
        throw InvalidArgument("SynthesisProblem: no block named '" + name + "'");
    }
    return b;
}

void SynthesisProblem::add_entry(std::vector<Triplet>& trips, int row, int block, int tau,
                                 int i, int j, double coeff) const {
    if (coeff == 0.0) {
        return;
    }
    const int idx = registry_.index(block, tau, i, j);
    if (idx >= 0) {
        trips.emplace_back(row, idx, coeff);
    }
    // Masked entries are fixed at zero; their terms vanish.
}

namespace {

// Rows of one spectral equality  L[tau+1] - A L[tau] - B M[tau] = RHS_tau
// (left multiplication by [zI-A -B]) over tau = 0..T, with L, M starting at
// index 1 and M[tau] multiplied by B; rhs nonzero only at tau = 0.
struct LeftFamily {
    int lblock, mblock;
    const Matrix* A;
    const Matrix* B;
    bool identity_rhs;
};

// Rows of  L[tau+1] - L[tau] A - M[tau] C = RHS_tau  (right multiplication by
// [zI-A; -C]) where M may start at 0 (its tau = 0 coefficient enters the z^0
// equation).
struct RightFamily {
    int lblock, mblock;
    const Matrix* A;
    const Matrix* C;
    bool identity_rhs;
};

}  // namespace

void SynthesisProblem::build_equalities(SparseMatrix& E, Vector& e) const {
    if (!registry_.finalized()) {
        throw InvalidArgument("SynthesisProblem: registry not finalized");
    }
    const Matrix& A = system_.A();
    const Matrix& B2 = system_.B2();
    const Matrix& C2 = system_.C2();
    const int T = T_;

    std::vector<Triplet> trips;
    std::vector<double> rhs;
    int row = 0;

    auto left_family = [&](int lblock, int mblock, bool identity_rhs) {
        const auto& lb = registry_.block(lblock);
        const auto& mb = registry_.block(mblock);
        const int rows = lb.rows;
        const int cols = lb.cols;
        const bool m_has_zero = mb.start == 0;
        // z^0: L[1] - B M[0] (the M[0] term only when M is proper).
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                add_entry(trips, row, lblock, 1, i, j, 1.0);
                if (m_has_zero) {
                    for (int k = 0; k < mb.rows; ++k) {
                        add_entry(trips, row, mblock, 0, k, j, -B2(i, k));
                    }
                }
                rhs.push_back(identity_rhs && i == j ? 1.0 : 0.0);
                ++row;
            }
        }
        // z^-tau, tau = 1..T-1: L[tau+1] - A L[tau] - B M[tau] = 0.
        for (int tau = 1; tau < T; ++tau) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    add_entry(trips, row, lblock, tau + 1, i, j, 1.0);
                    for (int k = 0; k < rows; ++k) {
                        add_entry(trips, row, lblock, tau, k, j, -A(i, k));
                    }
                    for (int k = 0; k < mb.rows; ++k) {
                        add_entry(trips, row, mblock, tau, k, j, -B2(i, k));
                    }
                    rhs.push_back(0.0);
                    ++row;
                }
            }
        }
        // z^-T closure: A L[T] + B M[T] = 0.
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                for (int k = 0; k < rows; ++k) {
                    add_entry(trips, row, lblock, T, k, j, A(i, k));
                }
                for (int k = 0; k < mb.rows; ++k) {
                    add_entry(trips, row, mblock, T, k, j, B2(i, k));
                }
                rhs.push_back(0.0);
                ++row;
            }
        }
    };

    auto right_family = [&](int lblock, int mblock, bool identity_rhs) {
        const auto& lb = registry_.block(lblock);
        const auto& mb = registry_.block(mblock);
        const int rows = lb.rows;
        const int cols = lb.cols;
        const bool m_has_zero = mb.start == 0;
        // z^0: L[1] - M[0] C.
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                add_entry(trips, row, lblock, 1, i, j, 1.0);
                if (m_has_zero) {
                    for (int k = 0; k < mb.cols; ++k) {
                        add_entry(trips, row, mblock, 0, i, k, -C2(k, j));
                    }
                }
                rhs.push_back(identity_rhs && i == j ? 1.0 : 0.0);
                ++row;
            }
        }
        // z^-tau, tau = 1..T-1: L[tau+1] - L[tau] A - M[tau] C = 0.
        for (int tau = 1; tau < T; ++tau) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j) {
                    add_entry(trips, row, lblock, tau + 1, i, j, 1.0);
                    for (int k = 0; k < cols; ++k) {
                        add_entry(trips, row, lblock, tau, i, k, -A(k, j));
                    }
                    for (int k = 0; k < mb.cols; ++k) {
                        add_entry(trips, row, mblock, tau, i, k, -C2(k, j));
                    }
                    rhs.push_back(0.0);
                    ++row;
                }
            }
        }
        // z^-T closure: L[T] A + M[T] C = 0.
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                for (int k = 0; k < cols; ++k) {
                    add_entry(trips, row, lblock, T, i, k, A(k, j));
                }
                for (int k = 0; k < mb.cols; ++k) {
                    add_entry(trips, row, mblock, T, i, k, C2(k, j));
                }
                rhs.push_back(0.0);
                ++row;
            }
        }
    };

    if (mode_ == SlsMode::StateFeedback) {
        left_family(block("phi_x"), block("phi_u"), /*identity_rhs=*/true);
    } else {
        left_family(block("phi_xx"), block("phi_ux"), true);    // (zI-A)Phi_xx - B2 Phi_ux = I
        left_family(block("phi_xy"), block("phi_uy"), false);   // (zI-A)Phi_xy - B2 Phi_uy = 0
        right_family(block("phi_xx"), block("phi_xy"), true);   // Phi_xx(zI-A) - Phi_xy C2 = I
        right_family(block("phi_ux"), block("phi_uy"), false);  // Phi_ux(zI-A) - Phi_uy C2 = 0
    }

    E.resize(row, registry_.size());
    E.setFromTriplets(trips.begin(), trips.end());
    E.makeCompressed();
    e = Eigen::Map<const Vector>(rhs.data(), static_cast<long>(rhs.size()));
}

namespace {

double left_family_residual(const FirTransferMatrix& L, const FirTransferMatrix& M,
                            const Matrix& A, const Matrix& B, bool identity_rhs, int T) {
    double worst = 0.0;
    const Matrix rhs0 = identity_rhs ? Matrix(Matrix::Identity(L.rows(), L.cols()))
                                     : Matrix(Matrix::Zero(L.rows(), L.cols()));
    worst = std::max(worst,
                     (L.coeff(1) - B * M.coeff(0) - rhs0).cwiseAbs().maxCoeff());
    for (int tau = 1; tau < T; ++tau) {
        worst = std::max(
            worst,
            (L.coeff(tau + 1) - A * L.coeff(tau) - B * M.coeff(tau)).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, (A * L.coeff(T) + B * M.coeff(T)).cwiseAbs().maxCoeff());
    return worst;
}

double right_family_residual(const FirTransferMatrix& L, const FirTransferMatrix& M,
                             const Matrix& A, const Matrix& C, bool identity_rhs, int T) {
    double worst = 0.0;
    const Matrix rhs0 = identity_rhs ? Matrix(Matrix::Identity(L.rows(), L.cols()))
                                     : Matrix(Matrix::Zero(L.rows(), L.cols()));
    worst = std::max(worst, (L.coeff(1) - M.coeff(0) * C - rhs0).cwiseAbs().maxCoeff());
    for (int tau = 1; tau < T; ++tau) {
        worst = std::max(
            worst,
            (L.coeff(tau + 1) - L.coeff(tau) * A - M.coeff(tau) * C).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, (L.coeff(T) * A + M.coeff(T) * C).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace

double SynthesisProblem::equality_residual_sf(const SlsParamsSF& p) const {
    return left_family_residual(p.phi_x, p.phi_u, system_.A(), system_.B2(), true, T_);
}

double SynthesisProblem::equality_residual_of(const SlsParamsOF& p) const {
    const Matrix& A = system_.A();
    const Matrix& B2 = system_.B2();
    const Matrix& C2 = system_.C2();
    double worst = left_family_residual(p.phi_xx, p.phi_ux, A, B2, true, T_);
    worst = std::max(worst, left_family_residual(p.phi_xy, p.phi_uy, A, B2, false, T_));
    worst = std::max(worst, right_family_residual(p.phi_xx, p.phi_xy, A, C2, true, T_));
    worst = std::max(worst, right_family_residual(p.phi_ux, p.phi_uy, A, C2, false, T_));
    return worst;
}

// ---------------------------------------------------------------------------
// Modules
// ---------------------------------------------------------------------------

ObjectiveExpr compose_objectives(const SynthesisProblem& problem,
                                 std::span<const ObjectiveModule* const> modules) {
    ObjectiveExpr h(problem.registry().size());
    for (const auto* m : modules) {
        m->compose(problem, h);
    }
    return h;
}

H2Objective::H2Objective(Matrix C1, Matrix D12) : c1_(std::move(C1)), d12_(std::move(D12)) {
    if (c1_.rows() != d12_.rows()) {
        throw DimensionMismatch("H2Objective: C1 and D12 must have equal row counts");
    }
}

void H2Objective::compose(const SynthesisProblem& problem, ObjectiveExpr& h) const {
    if (problem.mode() != SlsMode::StateFeedback) {
        throw InvalidArgument("H2Objective: state-feedback problems only (use LqgObjective)");
    }
    const SystemDims d = problem.system().dims();
    if (c1_.cols() != d.nx || d12_.cols() != d.nu) {
        throw DimensionMismatch("H2Objective: weight columns must match (nx, nu)");
    }
    const int bx = problem.block("phi_x");
    const int bu = problem.block("phi_u");
    const auto& reg = problem.registry();
    std::vector<std::pair<int, double>> combo;
    for (int tau = 1; tau <= problem.horizon(); ++tau) {
        for (int c = 0; c < d.nx; ++c) {
            for (int r = 0; r < c1_.rows(); ++r) {
                combo.clear();
                for (int i = 0; i < d.nx; ++i) {
                    if (c1_(r, i) != 0.0) {
                        const int idx = reg.index(bx, tau, i, c);
                        if (idx >= 0) {
                            combo.emplace_back(idx, c1_(r, i));
                        }
                    }
                }
                for (int i = 0; i < d.nu; ++i) {
                    if (d12_(r, i) != 0.0) {
                        const int idx = reg.index(bu, tau, i, c);
                        if (idx >= 0) {
                            combo.emplace_back(idx, d12_(r, i));
                        }
                    }
                }
                if (!combo.empty()) {
                    h.add_squared_term(combo, 1.0);
                }
            }
        }
    }
}

LqgObjective::LqgObjective(Matrix C1, Matrix D12)
    : c1_(std::move(C1)), d12_(std::move(D12)), use_system_weights_(true) {}

LqgObjective::LqgObjective(Matrix C1, Matrix D12, Matrix Wproc, Matrix Wmeas)
    : c1_(std::move(C1)),
      d12_(std::move(D12)),
      wproc_(std::move(Wproc)),
      wmeas_(std::move(Wmeas)),
      use_system_weights_(false) {}

void LqgObjective::compose(const SynthesisProblem& problem, ObjectiveExpr& h) const {
    if (problem.mode() != SlsMode::OutputFeedback) {
        throw InvalidArgument("LqgObjective: output-feedback problems only");
    }
    const SystemDims d = problem.system().dims();
    const Matrix& wp = use_system_weights_ ? problem.system().B1() : wproc_;
    const Matrix& wm = use_system_weights_ ? problem.system().D21() : wmeas_;
    if (c1_.rows() != d12_.rows() || c1_.cols() != d.nx || d12_.cols() != d.nu) {
        throw DimensionMismatch("LqgObjective: C1/D12 shapes must match (nz, nx, nu)");
    }
    if (wp.rows() != d.nx || wm.rows() != d.ny || wp.cols() != wm.cols()) {
        throw DimensionMismatch("LqgObjective: noise weights must be nx x m and ny x m");
    }

    const int bxx = problem.block("phi_xx");
    const int bux = problem.block("phi_ux");
    const int bxy = problem.block("phi_xy");
    const int buy = problem.block("phi_uy");
    const auto& reg = problem.registry();
    const int m = static_cast<int>(wp.cols());
    const int nz = static_cast<int>(c1_.rows());

    // Coefficient index k of [C1 D12] Phi [Wp; Wm]: entry (r, c) is a linear
    // combination over the entries of the four blocks at index k.
    std::vector<std::pair<int, double>> combo;
    for (int k = 0; k <= problem.horizon(); ++k) {
        for (int r = 0; r < nz; ++r) {
            for (int c = 0; c < m; ++c) {
                combo.clear();
                auto gather = [&](int blk, const Matrix& left, int lrow, const Matrix& right,
                                  int rcol, int rows, int cols) {
                    const auto& info = reg.block(blk);
                    if (k < info.start || k > info.horizon) {
                        return;
                    }
                    for (int a = 0; a < rows; ++a) {
                        const double lc = left(lrow, a);
                        if (lc == 0.0) {
                            continue;
                        }
                        for (int b = 0; b < cols; ++b) {
                            const double rc = right(b, rcol);
                            if (rc == 0.0) {
                                continue;
                            }
                            const int idx = reg.index(blk, k, a, b);
                            if (idx >= 0) {
                                combo.emplace_back(idx, lc * rc);
                            }
                        }
                    }
                };
                gather(bxx, c1_, r, wp, c, d.nx, d.nx);
                gather(bxy, c1_, r, wm, c, d.nx, d.ny);
                gather(bux, d12_, r, wp, c, d.nu, d.nx);
                gather(buy, d12_, r, wm, c, d.nu, d.ny);
                if (!combo.empty()) {
                    h.add_squared_term(combo, 1.0);
                }
            }
        }
    }
}

void ScalarMultiplier::compose(const SynthesisProblem&, ObjectiveExpr& h) const {
    h.scale(alpha_);
}

ElementL1::ElementL1(std::string block_name, double weight)
    : block_name_(std::move(block_name)), weight_(weight) {
    if (weight < 0.0) {
        throw InvalidArgument("ElementL1: weight must be nonnegative");
    }
}

void ElementL1::compose(const SynthesisProblem& problem, ObjectiveExpr& h) const {
    if (weight_ == 0.0) {
        return;
    }
    const int b = problem.block(block_name_);
    const auto& reg = problem.registry();
    const auto& info = reg.block(b);
    for (int tau = info.start; tau <= info.horizon; ++tau) {
        for (int i = 0; i < info.rows; ++i) {
            for (int j = 0; j < info.cols; ++j) {
                const int idx = reg.index(b, tau, i, j);
                if (idx >= 0) {
                    h.add_l1(idx, weight_);
                }
            }
        }
    }
}

SupportConstraint::SupportConstraint(
    std::string block_name, Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask)
    : block_name_(std::move(block_name)), mask_(std::move(mask)) {}

void SupportConstraint::apply(SynthesisProblem& problem) const {
    problem.registry().set_mask(problem.block(block_name_), mask_);
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

namespace {

struct SolvedProblem {
    Vector phi;
    double objective = 0.0;
    QpSolveInfo info;
    bool admm_converged = true;
};

SolvedProblem solve_assembled(SynthesisProblem& problem,
                              std::span<const ObjectiveModule* const> objectives,
                              std::span<const ConstraintModule* const> constraints) {
    for (const auto* c : constraints) {
        c->apply(problem);
    }
    problem.registry().finalize();

    // Constraint modules contribute their regularizers before objectives.
    ObjectiveExpr h(problem.registry().size());
    for (const auto* c : constraints) {
        c->compose(problem, h);
    }
    for (const auto* o : objectives) {
        o->compose(problem, h);
    }

    ConvexProgram prog;
    prog.n = problem.registry().size();
    prog.Q.resize(prog.n, prog.n);
    const auto& trips = h.quad_triplets();
    prog.Q.setFromTriplets(trips.begin(), trips.end());
    prog.Q.makeCompressed();
    prog.q = h.linear();
    prog.c0 = h.constant();
    problem.build_equalities(prog.E, prog.e);
    prog.l1 = h.l1_terms();

    SolvedProblem out;
    if (prog.l1.empty()) {
        QpSolution s = solve_qp(prog);
        out.phi = std::move(s.phi);
        out.info = s.info;
    } else {
        AdmmSolution s = solve_admm(prog);
        out.phi = std::move(s.phi);
        out.info = s.info;
        out.admm_converged = s.converged;
    }
    out.objective = prog.objective(out.phi);
    return out;
}

constexpr double kEqualityTol = 1e-8;

}  // namespace

SfSynthesisResult synthesize_sf(const LTISystem& system, int T,
                                std::span<const ObjectiveModule* const> objectives,
                                std::span<const ConstraintModule* const> constraints) {
    SynthesisProblem problem = assemble_sf(system, T);
    SolvedProblem s = solve_assembled(problem, objectives, constraints);
    const auto& reg = problem.registry();
    SfSynthesisResult out{
        SlsParamsSF{reg.unflatten_block(problem.block("phi_x"), s.phi),
                    reg.unflatten_block(problem.block("phi_u"), s.phi)},
        s.objective, 0.0, s.info, s.admm_converged};
    out.max_equality_residual = problem.equality_residual_sf(out.params);
    if (out.max_equality_residual > kEqualityTol) {
        throw InfeasibleSynthesis(
            "synthesize_sf: solution violates the achievability equalities",
            out.max_equality_residual);
    }
    return out;
}

OfSynthesisResult synthesize_of(const LTISystem& system, int T,
                                std::span<const ObjectiveModule* const> objectives,
                                std::span<const ConstraintModule* const> constraints) {
    SynthesisProblem problem = assemble_of(system, T);
    SolvedProblem s = solve_assembled(problem, objectives, constraints);
    const auto& reg = problem.registry();
    OfSynthesisResult out{
        SlsParamsOF{reg.unflatten_block(problem.block("phi_xx"), s.phi),
                    reg.unflatten_block(problem.block("phi_ux"), s.phi),
                    reg.unflatten_block(problem.block("phi_xy"), s.phi),
                    reg.unflatten_block(problem.block("phi_uy"), s.phi)},
        s.objective, 0.0, s.info, s.admm_converged};
    out.max_equality_residual = problem.equality_residual_of(out.params);
    if (out.max_equality_residual > kEqualityTol) {
        throw InfeasibleSynthesis(
            "synthesize_of: solution violates the achievability equalities",
            out.max_equality_residual);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Framework adapters
// ---------------------------------------------------------------------------

const LTISystem& require_lti(const SystemModel& system, const std::string& who) {
    const auto* lti = dynamic_cast<const LTISystem*>(&system);
    if (lti == nullptr) {
        throw InvalidArgument(who + ": requires an LTI system model");
    }
    return *lti;
}

namespace {

std::vector<const ObjectiveModule*> raw(
    const std::vector<std::shared_ptr<ObjectiveModule>>& v) {
    std::vector<const ObjectiveModule*> out;
    out.reserve(v.size());
    for (const auto& p : v) {
        out.push_back(p.get());
    }
    return out;
}

std::vector<const ConstraintModule*> raw(
    const std::vector<std::shared_ptr<ConstraintModule>>& v) {
    std::vector<const ConstraintModule*> out;
    out.reserve(v.size());
    for (const auto& p : v) {
        out.push_back(p.get());
    }
    return out;
}

}  // namespace

SlsStateFeedbackSynthesis::SlsStateFeedbackSynthesis(
    int T, std::vector<std::shared_ptr<ObjectiveModule>> objectives,
    std::vector<std::shared_ptr<ConstraintModule>> constraints)
    : T_(T), objectives_(std::move(objectives)), constraints_(std::move(constraints)) {}

SfSynthesisResult SlsStateFeedbackSynthesis::synthesize_full(const LTISystem& system) const {
    const auto objs = raw(objectives_);
    const auto cons = raw(constraints_);
    return synthesize_sf(system, T_, objs, cons);
}

std::unique_ptr<ControllerModel> SlsStateFeedbackSynthesis::synthesize(
    const SystemModel& system) const {
    auto result = synthesize_full(require_lti(system, "SlsStateFeedbackSynthesis"));
    return std::make_unique<SfSlsController>(std::move(result.params));
}

SlsOutputFeedbackSynthesis::SlsOutputFeedbackSynthesis(
    int T, std::vector<std::shared_ptr<ObjectiveModule>> objectives,
    std::vector<std::shared_ptr<ConstraintModule>> constraints)
    : T_(T), objectives_(std::move(objectives)), constraints_(std::move(constraints)) {}

OfSynthesisResult SlsOutputFeedbackSynthesis::synthesize_full(const LTISystem& system) const {
    const auto objs = raw(objectives_);
    const auto cons = raw(constraints_);
    return synthesize_of(system, T_, objs, cons);
}

std::unique_ptr<ControllerModel> SlsOutputFeedbackSynthesis::synthesize(
    const SystemModel& system) const {
    const LTISystem& lti = require_lti(system, "SlsOutputFeedbackSynthesis");
    auto result = synthesize_full(lti);
    return std::make_unique<OfSlsController>(std::move(result.params), lti.D22());
}

}  // namespace slskit
