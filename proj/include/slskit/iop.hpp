#pragma once

#include <memory>

#include "slskit/controllers.hpp"
#include "slskit/lti_system.hpp"
#include "slskit/qp.hpp"

namespace slskit {

/// FIR Markov-parameter truncations of the plant maps
///   y = G u + Pyw w,  zbar = Pzu u + Pzw w
/// i.e. G[0] = D22, G[tau] = C2 A^(tau-1) B2 and analogously for the others.
struct PlantTransfers {
    FirTransferMatrix G;    // ny x nu
    FirTransferMatrix Pyw;  // ny x nw
    FirTransferMatrix Pzu;  // nz x nu
    FirTransferMatrix Pzw;  // nz x nw
};

/// Requires a stable plant (spectral radius of A < 1); throws UnstablePlant.
PlantTransfers plant_transfers(const LTISystem& system, int horizon);

/// The four input-output parameters, all proper (start index 0), satisfying
///   X - GY = I,  W - GZ = 0,  -XG + W = 0,  -YG + Z = I
/// coefficient-wise up to the truncation horizon.
struct IopParams {
    FirTransferMatrix X;  // ny x ny
    FirTransferMatrix W;  // ny x nu
    FirTransferMatrix Y;  // nu x ny
    FirTransferMatrix Z;  // nu x nu
};

struct IopSynthesisResult {
    IopParams params;
    double objective_value = 0.0;
    /// Max abs residual of the four parametrization equalities at indices 0..T.
    double max_equality_residual = 0.0;
    /// Max abs residual at indices T+1..2T, where the FIR truncation cannot be
    /// exact; accepted solutions keep it below 1e-6.
    double truncation_residual = 0.0;
    QpSolveInfo solve_info;
};

/// Minimizes ||Pzw + Pzu Y Pyw||_H2^2 (products truncated at index T) subject
/// to the parametrization equalities. The objective depends on Y alone and the
/// equalities pin X, W, Z affinely in Y, so the solve runs over Y and the
/// other three blocks are reconstructed; all four residual families are then
/// verified on the result.
IopSynthesisResult synthesize_iop(const LTISystem& system, int T);

/// Max abs residual of the four equality families over spectral indices
/// [lo, hi], with the plant extended to index hi.
double iop_residual(const IopParams& p, const PlantTransfers& plant, int lo, int hi);

class IopSynthesis : public SynthesisAlgorithm {
  public:
    explicit IopSynthesis(int T) : T_(T) {}

    std::unique_ptr<ControllerModel> synthesize(const SystemModel& system) const override;
    IopSynthesisResult synthesize_full(const LTISystem& system) const;
    std::string describe() const override { return "iop"; }

  private:
    int T_;
};

}  // namespace slskit
