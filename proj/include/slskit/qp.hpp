#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

#include "slskit/errors.hpp"
#include "slskit/fir.hpp"
#include "slskit/types.hpp"

namespace slskit {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// ---------------------------------------------------------------------------
// Variable registry
// ---------------------------------------------------------------------------

/// Named FIR matrix variables with optional support masks and a flattening map
/// onto one global coordinate vector phi.
///
/// Masked-out entries never enter phi: they are eliminated, not constrained,
/// so they are exactly zero in any solution. Flattening order is the block
/// declaration order, then (tau, row, col) row-major within a block, which
/// keeps coordinate numbering stable and deterministic.
class VariableRegistry {
  public:
    struct Block {
        std::string name;
        int rows = 0;
        int cols = 0;
        int start = 0;
        int horizon = 0;
    };

    int add_block(const std::string& name, int rows, int cols, int start, int horizon);

    /// Restrict a block's support: entries where mask(i, j) == false are fixed
    /// to zero in every spectral element. Must precede finalize().
    void set_mask(int block, const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask);

    void finalize();
    bool finalized() const { return finalized_; }

    int size() const;
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const Block& block(int b) const { return blocks_.at(static_cast<size_t>(b)); }
    int block_id(const std::string& name) const;  // -1 when absent

    /// Global coordinate of one entry; -1 when masked out.
    int index(int block, int tau, int i, int j) const;

    FirTransferMatrix unflatten_block(int block, const Vector& phi) const;

  private:
    std::vector<Block> blocks_;
    std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>> masks_;
    std::vector<std::vector<int>> coord_;  // per block, local flat index -> global or -1
    int size_ = 0;
    bool finalized_ = false;
};

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

/// One weighted |r . phi| term of an l1 penalty sum.
struct L1Term {
    double weight = 0.0;
    std::vector<std::pair<int, double>> coeffs;  // (coordinate, coefficient)
};

/// minimize  1/2 phi' Q phi + q' phi + c0 + sum_r weight_r |r . phi|
/// subject to E phi = e
struct ConvexProgram {
    int n = 0;
    SparseMatrix Q;  // n x n, symmetric positive semidefinite
    Vector q;
    double c0 = 0.0;
    SparseMatrix E;  // m x n
    Vector e;
    std::vector<L1Term> l1;

    int m() const { return static_cast<int>(E.rows()); }
    double smooth_objective(const Vector& phi) const;
    double objective(const Vector& phi) const;  // includes the l1 terms
};

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

struct QpSolveInfo {
    double primal_residual = 0.0;        // ||E phi - e||_inf
    double stationarity_residual = 0.0;  // ||Q phi + q + E' nu||_inf
    bool regularized = false;            // fell back to the regularized KKT
    int refinement_steps = 0;
};

struct QpSolution {
    Vector phi;
    Vector nu;  // equality multipliers
    QpSolveInfo info;
};

/// Solve the smooth part (l1 ignored; use solve_admm when l1 is present) via
/// the KKT system [Q E'; E 0][phi; nu] = [-q; e].
///
/// A plain sparse (or dense, for small problems) LU factorization is tried
/// first; when the KKT matrix is singular -- redundant but consistent
/// equalities produce exactly that -- the solve falls back to a regularized
/// KKT with 1e-10*I on the (1,1) block and -1e-10*I on the (2,2) block, then
/// refines iteratively against the unregularized system.
///
/// Accepted solutions satisfy primal residual <= 1e-9 and stationarity
/// residual <= 1e-7; otherwise the equalities are tested for consistency by
/// least squares and the solve throws InfeasibleSynthesis (residual > 1e-6)
/// or NumericalFailure.
QpSolution solve_qp(const ConvexProgram& p);

struct AdmmOptions {
    double rho = 1.0;
    int max_iterations = 10000;
    double eps_abs = 1e-8;
    double eps_rel = 1e-6;
};

struct AdmmSolution {
    Vector phi;
    bool converged = false;
    int iterations = 0;
    double primal_residual = 0.0;  // ||R phi - z||_inf at exit
    double dual_residual = 0.0;    // rho * ||R'(z - z_prev)||_inf at exit
    QpSolveInfo info;              // certificates of the final x-update
};

/// ADMM splitting for the l1 terms: soft-thresholding on z = R phi with the
/// x-update solving one equality-constrained QP per iteration (KKT factored
/// once). On hitting the iteration cap the best iterate is returned flagged
/// non-converged rather than thrown.
AdmmSolution solve_admm(const ConvexProgram& p, const AdmmOptions& opts = {});

/// Plain-text sparse triplet dump of (Q, q, E, e) for cross-checking against
/// external solvers. Sections: "Q nnz", "q n", "E m n nnz", "e m", each
/// followed by one entry per line ("i j value" for matrices, "i value" for
/// vectors), in %.17g.
void dump_program(const ConvexProgram& p, std::ostream& os);

}  // namespace slskit
