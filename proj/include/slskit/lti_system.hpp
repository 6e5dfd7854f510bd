#pragma once

#include <string>

#include "slskit/framework.hpp"
#include "slskit/types.hpp"

namespace slskit {

/// Discrete-time LTI plant
///
///   x[t+1] = A x[t] + B1 w[t] + B2 u[t]
///   zbar[t] = C1 x[t] + D11 w[t] + D12 u[t]
///   y[t]    = C2 x[t] + D21 w[t] + D22 u[t]
class LTISystem : public SystemModel {
  public:
    LTISystem(Matrix A, Matrix B1, Matrix B2, Matrix C1, Matrix D11, Matrix D12, Matrix C2,
              Matrix D21, Matrix D22);

    SystemDims dims() const override { return dims_; }
    void reset() override { x_.setZero(); }
    Vector state() const override { return x_; }
    void set_state(const Vector& x);

    Vector measure(const Vector& w) const override;
    StepOutput step(const Vector& u, const Vector& w) override;

    bool direct_feedthrough() const override { return D22_.cwiseAbs().maxCoeff() > 0.0; }
    std::string describe() const override;

    const Matrix& A() const { return A_; }
    const Matrix& B1() const { return B1_; }
    const Matrix& B2() const { return B2_; }
    const Matrix& C1() const { return C1_; }
    const Matrix& D11() const { return D11_; }
    const Matrix& D12() const { return D12_; }
    const Matrix& C2() const { return C2_; }
    const Matrix& D21() const { return D21_; }
    const Matrix& D22() const { return D22_; }

  private:
    Matrix A_, B1_, B2_, C1_, D11_, D12_, C2_, D21_, D22_;
    Vector x_;
    SystemDims dims_;
};

/// n-node chain system with tridiagonal A (corner diagonal 0.4, interior 0.3,
/// off-diagonal 0.1), fully actuated (B2 = I), disturbance on every state
/// (B1 = I), perfect state measurement (C2 = I, D21 = 0), and an LQR-style
/// regulated output zbar = [x; u] (C1 = [I; 0], D12 = [0; I]).
LTISystem make_chain(int n);

/// Chain variant with the measurement corrupted through an extra noise block:
/// nw = n + n, B1 = [I 0], D21 = [0 sigma*I]. The first block of w disturbs
/// the state, the second only the measurement.
LTISystem make_chain_measured(int n, double sigma);

/// Largest eigenvalue magnitude of a square matrix.
double spectral_radius(const Matrix& A);

/// 0-based index of the chain's center node: ceil(n/2) in 1-based terms.
int chain_center_node(int n);

}  // namespace slskit
