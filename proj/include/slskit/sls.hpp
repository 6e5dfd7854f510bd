#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "slskit/controllers.hpp"
#include "slskit/framework.hpp"
#include "slskit/lti_system.hpp"
#include "slskit/qp.hpp"

namespace slskit {

enum class SlsMode { StateFeedback, OutputFeedback };

/// Accumulator for the scalar objective expression h passed through the
/// module composition chain g = ... g3(Phi, g2(Phi, g1(Phi, 0))).
///
/// Holds a quadratic form (1/2 phi' Q phi convention), linear and constant
/// parts, and elementwise l1 terms, all over registry coordinates.
class ObjectiveExpr {
  public:
    explicit ObjectiveExpr(int n) : n_(n), linear_(Vector::Zero(n)) {}

    int n() const { return n_; }

    /// Adds weight * (sum_i c_i phi_i)^2.
    void add_squared_term(const std::vector<std::pair<int, double>>& lin, double weight);
    void add_linear(int coord, double value) { linear_(coord) += value; }
    void add_constant(double value) { constant_ += value; }
    void add_l1(int coord, double weight);

    /// h' = alpha * h. Negative alpha on a nonempty expression is rejected:
    /// the solver handles convex programs only.
    void scale(double alpha);

    double evaluate(const Vector& phi) const;

    const std::vector<Triplet>& quad_triplets() const { return quad_; }
    const Vector& linear() const { return linear_; }
    double constant() const { return constant_; }
    const std::vector<L1Term>& l1_terms() const { return l1_; }
    bool empty() const;

  private:
    int n_;
    std::vector<Triplet> quad_;  // 1/2 phi' Q phi convention, both halves stored
    Vector linear_;
    double constant_ = 0.0;
    std::vector<L1Term> l1_;
};

/// Assembled SLS program over FIR-truncated closed-loop maps: the registered
/// variable blocks plus the achievability equalities of the chosen mode.
class SynthesisProblem {
  public:
    SlsMode mode() const { return mode_; }
    int horizon() const { return T_; }
    const LTISystem& system() const { return system_; }

    VariableRegistry& registry() { return registry_; }
    const VariableRegistry& registry() const { return registry_; }

    // Block ids: {phi_x, phi_u} for state feedback,
    // {phi_xx, phi_ux, phi_xy, phi_uy} for output feedback.
    int block(const std::string& name) const;

    /// Achievability equalities on the flattened coordinates (registry must be
    /// finalized). State feedback emits the spectral expansion of
    /// [zI-A -B2][Phi_x; Phi_u] = I with FIR closure; output feedback emits
    /// per-tau coefficients of both the left product ([zI-A -B2] Phi = [I 0])
    /// and the right product (Phi [zI-A; -C2] = [I; 0]), each with closure at
    /// tau = T.
    void build_equalities(SparseMatrix& E, Vector& e) const;

    /// Max abs residual of those equalities at a concrete parameter point.
    double equality_residual_sf(const SlsParamsSF& p) const;
    double equality_residual_of(const SlsParamsOF& p) const;

  private:
    friend SynthesisProblem assemble_sf(const LTISystem&, int);
    friend SynthesisProblem assemble_of(const LTISystem&, int);

    SynthesisProblem(const LTISystem& system, int T, SlsMode mode);

    void add_entry(std::vector<Triplet>& trips, int row, int block, int tau, int i, int j,
                   double coeff) const;

    LTISystem system_;
    int T_;
    SlsMode mode_;
    VariableRegistry registry_;
};

SynthesisProblem assemble_sf(const LTISystem& system, int T);
SynthesisProblem assemble_of(const LTISystem& system, int T);

// ---------------------------------------------------------------------------
// Objective and constraint modules
// ---------------------------------------------------------------------------

class ObjectiveModule {
  public:
    virtual ~ObjectiveModule() = default;

    /// h' = compose(Phi, h): folds this module's contribution into h.
    virtual void compose(const SynthesisProblem& problem, ObjectiveExpr& h) const = 0;
    virtual std::string describe() const = 0;
};

/// Constraint modules may also contribute objective terms (regularizers on
/// variables they introduce), so they are objective modules too; during
/// synthesis their contributions run before the plain objective modules.
class ConstraintModule : public ObjectiveModule {
  public:
    /// Structural hook, applied before the variables are flattened.
    virtual void apply(SynthesisProblem& problem) const = 0;

    void compose(const SynthesisProblem&, ObjectiveExpr&) const override {}
    std::string describe() const override { return "constraint"; }
};

/// Folds the modules left to right starting from h = 0.
ObjectiveExpr compose_objectives(const SynthesisProblem& problem,
                                 std::span<const ObjectiveModule* const> modules);

/// ||[C1 D12][Phi_x; Phi_u]||_H2^2 (state feedback).
class H2Objective : public ObjectiveModule {
  public:
    H2Objective(Matrix C1, Matrix D12);

    void compose(const SynthesisProblem& problem, ObjectiveExpr& h) const override;
    std::string describe() const override { return "h2"; }

  private:
    Matrix c1_, d12_;
};

/// ||[C1 D12][Phi_xx Phi_xy; Phi_ux Phi_uy][Wproc; Wmeas]||_H2^2 (output
/// feedback). The right factor defaults to the system's [B1; D21]; explicit
/// weights express a different assumed noise than the simulated one.
class LqgObjective : public ObjectiveModule {
  public:
    LqgObjective(Matrix C1, Matrix D12);
    LqgObjective(Matrix C1, Matrix D12, Matrix Wproc, Matrix Wmeas);

    void compose(const SynthesisProblem& problem, ObjectiveExpr& h) const override;
    std::string describe() const override { return "lqg-h2"; }

  private:
    Matrix c1_, d12_;
    Matrix wproc_, wmeas_;  // empty => use B1 / D21
    bool use_system_weights_;
};

/// h' = alpha * h.
class ScalarMultiplier : public ObjectiveModule {
  public:
    explicit ScalarMultiplier(double alpha) : alpha_(alpha) {}

    void compose(const SynthesisProblem&, ObjectiveExpr& h) const override;
    std::string describe() const override { return "mul"; }

  private:
    double alpha_;
};

/// Elementwise l1 penalty, weight * sum |entries| over every spectral element
/// of one block.
class ElementL1 : public ObjectiveModule {
  public:
    ElementL1(std::string block_name, double weight);

    void compose(const SynthesisProblem& problem, ObjectiveExpr& h) const override;
    std::string describe() const override { return "l1(" + block_name_ + ")"; }

  private:
    std::string block_name_;
    double weight_;
};

/// Forces masked-out entries of every spectral element of a block to zero by
/// eliminating them from the variable set.
class SupportConstraint : public ConstraintModule {
  public:
    SupportConstraint(std::string block_name,
                      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask);

    void apply(SynthesisProblem& problem) const override;
    std::string describe() const override { return "support(" + block_name_ + ")"; }

  private:
    std::string block_name_;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask_;
};

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

struct SfSynthesisResult {
    SlsParamsSF params;
    double objective_value = 0.0;
    double max_equality_residual = 0.0;
    QpSolveInfo solve_info;
    bool admm_converged = true;
};

struct OfSynthesisResult {
    SlsParamsOF params;
    double objective_value = 0.0;
    double max_equality_residual = 0.0;
    QpSolveInfo solve_info;
    bool admm_converged = true;
};

/// Assembles and solves the state-feedback program; constraint modules are
/// processed (structure, then objective contributions) before the objective
/// modules. The returned parameters satisfy every equality to 1e-8.
SfSynthesisResult synthesize_sf(const LTISystem& system, int T,
                                std::span<const ObjectiveModule* const> objectives,
                                std::span<const ConstraintModule* const> constraints = {});

OfSynthesisResult synthesize_of(const LTISystem& system, int T,
                                std::span<const ObjectiveModule* const> objectives,
                                std::span<const ConstraintModule* const> constraints = {});

// ---------------------------------------------------------------------------
// SynthesisAlgorithm adapters for the framework workflow
// ---------------------------------------------------------------------------

class SlsStateFeedbackSynthesis : public SynthesisAlgorithm {
  public:
    SlsStateFeedbackSynthesis(int T, std::vector<std::shared_ptr<ObjectiveModule>> objectives,
                              std::vector<std::shared_ptr<ConstraintModule>> constraints = {});

    std::unique_ptr<ControllerModel> synthesize(const SystemModel& system) const override;
    SfSynthesisResult synthesize_full(const LTISystem& system) const;
    std::string describe() const override { return "sls-sf"; }

  private:
    int T_;
    std::vector<std::shared_ptr<ObjectiveModule>> objectives_;
    std::vector<std::shared_ptr<ConstraintModule>> constraints_;
};

class SlsOutputFeedbackSynthesis : public SynthesisAlgorithm {
  public:
    SlsOutputFeedbackSynthesis(int T, std::vector<std::shared_ptr<ObjectiveModule>> objectives,
                               std::vector<std::shared_ptr<ConstraintModule>> constraints = {});

    std::unique_ptr<ControllerModel> synthesize(const SystemModel& system) const override;
    OfSynthesisResult synthesize_full(const LTISystem& system) const;
    std::string describe() const override { return "sls-of"; }

  private:
    int T_;
    std::vector<std::shared_ptr<ObjectiveModule>> objectives_;
    std::vector<std::shared_ptr<ConstraintModule>> constraints_;
};

/// The system must be an LTISystem for the SLS algorithms; throws
/// InvalidArgument otherwise.
const LTISystem& require_lti(const SystemModel& system, const std::string& who);

}  // namespace slskit
