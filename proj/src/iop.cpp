#include "slskit/iop.hpp"

#include <algorithm>
#include <cmath>

#include "slskit/errors.hpp"
#include "slskit/sls.hpp"

namespace slskit {

PlantTransfers plant_transfers(const LTISystem& system, int horizon) {
    if (horizon < 1) {
        throw InvalidArgument("plant_transfers: horizon must be >= 1");
    }
    const double rho = spectral_radius(system.A());
    if (rho >= 1.0) {
        throw UnstablePlant("plant_transfers: spectral radius " + std::to_string(rho) +
                            " >= 1; IOP targets stable plants");
    }
    const SystemDims d = system.dims();
    PlantTransfers tf{FirTransferMatrix(d.ny, d.nu, 0, horizon),
                      FirTransferMatrix(d.ny, d.nw, 0, horizon),
                      FirTransferMatrix(d.nz, d.nu, 0, horizon),
                      FirTransferMatrix(d.nz, d.nw, 0, horizon)};
    tf.G.at(0) = system.D22();
    tf.Pyw.at(0) = system.D21();
    tf.Pzu.at(0) = system.D12();
    tf.Pzw.at(0) = system.D11();
    Matrix pu = system.B2();  // A^(tau-1) B2
    Matrix pw = system.B1();  // A^(tau-1) B1
    for (int tau = 1; tau <= horizon; ++tau) {
        tf.G.at(tau) = system.C2() * pu;
        tf.Pyw.at(tau) = system.C2() * pw;
        tf.Pzu.at(tau) = system.C1() * pu;
        tf.Pzw.at(tau) = system.C1() * pw;
        if (tau < horizon) {
            pu = system.A() * pu;
            pw = system.A() * pw;
        }
    }
    return tf;
}

double iop_residual(const IopParams& p, const PlantTransfers& plant, int lo, int hi) {
    const auto& G = plant.G;
    const FirTransferMatrix gy = fir::multiply(G, p.Y, hi);
    const FirTransferMatrix gz = fir::multiply(G, p.Z, hi);
    const FirTransferMatrix xg = fir::multiply(p.X, G, hi);
    const FirTransferMatrix yg = fir::multiply(p.Y, G, hi);
    double worst = 0.0;
    const Matrix iy = Matrix::Identity(p.X.rows(), p.X.cols());
    const Matrix iu = Matrix::Identity(p.Z.rows(), p.Z.cols());
    for (int k = lo; k <= hi; ++k) {
        const Matrix r1 = p.X.coeff(k) - gy.coeff(k) - (k == 0 ? iy : Matrix::Zero(iy.rows(), iy.cols()));
        const Matrix r2 = p.W.coeff(k) - gz.coeff(k);
        const Matrix r3 = p.W.coeff(k) - xg.coeff(k);
        const Matrix r4 = p.Z.coeff(k) - yg.coeff(k) - (k == 0 ? iu : Matrix::Zero(iu.rows(), iu.cols()));
        worst = std::max({worst, r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff(),
                          r3.cwiseAbs().maxCoeff(), r4.cwiseAbs().maxCoeff()});
    }
    return worst;
}

IopSynthesisResult synthesize_iop(const LTISystem& system, int T) {
    if (T < 1) {
        throw InvalidArgument("synthesize_iop: T must be >= 1");
    }
    const SystemDims d = system.dims();
    if (d.nu == 0) {
        throw DimensionMismatch("synthesize_iop: system has no actuators");
    }
    if (system.D22().cwiseAbs().maxCoeff() != 0.0) {
        throw InvalidArgument(
            "synthesize_iop: D22 must be zero (the FIR feedback realization needs X[0] = I)");
    }
    // Markov parameters out to 2T so the truncation tail can be audited.
    const PlantTransfers plant = plant_transfers(system, 2 * T);

    // Objective ||Pzw + Pzu Y Pyw||_H2^2 over coefficients 0..T, quadratic in
    // the stacked coordinates of Y[0..T] (column-major per element).
    const int ny = d.ny, nu = d.nu, nz = d.nz, nw = d.nw;
    const int ycoords = nu * ny;
    const int nvar = (T + 1) * ycoords;
    const int rows_per_k = nz * nw;

    // U_d maps vec(Y[j]) to the index-(j+d) coefficient of Pzu Y Pyw:
    // U_d = sum_{i+l=d} Pyw[l]' (x) Pzu[i].
    std::vector<Matrix> U(static_cast<size_t>(T) + 1);
    for (int dd = 0; dd <= T; ++dd) {
        Matrix u = Matrix::Zero(rows_per_k, ycoords);
        for (int i = 0; i <= dd; ++i) {
            const int l = dd - i;
            const Matrix& pzu = plant.Pzu.at(i);
            const Matrix& pyw = plant.Pyw.at(l);
            for (int b = 0; b < nw; ++b) {
                for (int a = 0; a < ny; ++a) {
                    const double c = pyw(a, b);
                    if (c == 0.0) {
                        continue;
                    }
                    u.block(b * nz, a * nu, nz, nu) += c * pzu;
                }
            }
        }
        U[static_cast<size_t>(dd)] = std::move(u);
    }

    Matrix Qd = Matrix::Zero(nvar, nvar);
    Vector qlin = Vector::Zero(nvar);
    double c0 = 0.0;
    Matrix Lk(rows_per_k, nvar);
    for (int k = 0; k <= T; ++k) {
        const int active = (k + 1) * ycoords;
        Lk.leftCols(active).setZero();
        for (int j = 0; j <= k; ++j) {
            Lk.middleCols(j * ycoords, ycoords) = U[static_cast<size_t>(k - j)];
        }
        const Vector b = Eigen::Map<const Vector>(plant.Pzw.at(k).data(), rows_per_k);
        auto La = Lk.leftCols(active);
        Qd.topLeftCorner(active, active)
            .selfadjointView<Eigen::Lower>()
            .rankUpdate(La.transpose(), 2.0);
        qlin.head(active).noalias() += 2.0 * La.transpose() * b;
        c0 += b.squaredNorm();
    }
    Qd.triangularView<Eigen::StrictlyUpper>() = Qd.transpose();

    ConvexProgram prog;
    prog.n = nvar;
    prog.Q = Qd.sparseView(1.0, 0.0);
    prog.Q.makeCompressed();
    prog.q = qlin;
    prog.c0 = c0;
    prog.E.resize(0, nvar);
    prog.e = Vector();

    QpSolution sol = solve_qp(prog);

    IopSynthesisResult out{IopParams{FirTransferMatrix(ny, ny, 0, T),
                                     FirTransferMatrix(ny, nu, 0, T),
                                     FirTransferMatrix(nu, ny, 0, T),
                                     FirTransferMatrix(nu, nu, 0, T)},
                           prog.objective(sol.phi), 0.0, 0.0, sol.info};
    for (int k = 0; k <= T; ++k) {
        out.params.Y.at(k) =
            Eigen::Map<const Matrix>(sol.phi.data() + k * ycoords, nu, ny);
    }

    // X = I + GY, W = XG, Z = I + YG, truncated at T. Coefficients up to T use
    // plant coefficients up to T only, so these equalities are exact there.
    const FirTransferMatrix gy = fir::multiply(plant.G, out.params.Y, T);
    for (int k = 0; k <= T; ++k) {
        out.params.X.at(k) = gy.coeff(k);
    }
    out.params.X.at(0) += Matrix::Identity(ny, ny);
    const FirTransferMatrix xg = fir::multiply(out.params.X, plant.G, T);
    const FirTransferMatrix ygg = fir::multiply(out.params.Y, plant.G, T);
    for (int k = 0; k <= T; ++k) {
        out.params.W.at(k) = xg.coeff(k);
        out.params.Z.at(k) = ygg.coeff(k);
    }
    out.params.Z.at(0) += Matrix::Identity(nu, nu);

    out.max_equality_residual = iop_residual(out.params, plant, 0, T);
    out.truncation_residual = iop_residual(out.params, plant, T + 1, 2 * T);
    if (out.max_equality_residual > 1e-8) {
        throw NumericalFailure("synthesize_iop: parametrization equalities violated (" +
                               std::to_string(out.max_equality_residual) + ")");
    }
    if (out.truncation_residual > 1e-6) {
        throw NumericalFailure("synthesize_iop: truncation residual " +
                               std::to_string(out.truncation_residual) +
                               " above 1e-6; increase T");
    }
    return out;
}

IopSynthesisResult IopSynthesis::synthesize_full(const LTISystem& system) const {
    return synthesize_iop(system, T_);
}

std::unique_ptr<ControllerModel> IopSynthesis::synthesize(const SystemModel& system) const {
    auto result = synthesize_full(require_lti(system, "IopSynthesis"));
    return std::make_unique<FirFeedbackController>(std::move(result.params.X),
                                                   std::move(result.params.Y));
}

}  // namespace slskit
