#pragma once

#include <vector>

#include "slskit/fir.hpp"
#include "slskit/framework.hpp"

namespace slskit {

struct SlsParamsSF {
    FirTransferMatrix phi_x;  // nx x nx, start 1
    FirTransferMatrix phi_u;  // nu x nx, start 1
};

struct SlsParamsOF {
    FirTransferMatrix phi_xx;  // nx x nx, start 1
    FirTransferMatrix phi_ux;  // nu x nx, start 1
    FirTransferMatrix phi_xy;  // nx x ny, start 1
    FirTransferMatrix phi_uy;  // nu x ny, start 0
};

namespace detail {

/// Fixed-depth history of vectors with zero prehistory. back(0) is the most
/// recent push; anything older than the depth (or never pushed) reads zero.
class History {
  public:
    History(int dim, int depth);
    void reset();
    void push(const Vector& v);
    const Vector& back(int steps) const;

  private:
    std::vector<Vector> ring_;
    Vector zero_;
    int head_ = 0;
    long long count_ = 0;
};

}  // namespace detail

/// State-feedback SLS controller. Reconstructs the disturbance estimates
/// what[t-1] = x[t] - xhat[t] and plays the synthesized maps against them:
///
///   u[t]      = sum_{tau=1..T} phi_u[tau] what[t-tau]
///   xhat[t+1] = sum_{tau=2..T} phi_x[tau] what[t+1-tau]
class SfSlsController : public ControllerModel {
  public:
    explicit SfSlsController(SlsParamsSF params);

    int measurement_dim() const override;
    int control_dim() const override;
    void reset() override;
    Vector control(const Vector& y) override;
    std::string describe() const override;

    const SlsParamsSF& params() const { return params_; }

  private:
    SlsParamsSF params_;
    detail::History what_;
    Vector xhat_;
};

/// Output-feedback SLS controller:
///
///   u[t] = (I + phi_uy[0] D22)^{-1} (u'[t] + phi_uy[0] y[t])
///
/// with internal states
///
///   u'[t]   = sum_{tau=1..T} phi_ux[tau] beta[t-tau]
///           + sum_{tau=1..T} phi_uy[tau] ybar[t-tau]
///   ybar[t] = y[t] - D22 u[t]
///   beta[t] = -sum_{tau=2..T} phi_xx[tau] beta[t+1-tau]
///             -sum_{tau=1..T} phi_xy[tau] ybar[t+1-tau]
class OfSlsController : public ControllerModel {
  public:
    OfSlsController(SlsParamsOF params, Matrix D22);

    int measurement_dim() const override;
    int control_dim() const override;
    void reset() override;
    Vector control(const Vector& y) override;
    std::string describe() const override;

    const SlsParamsOF& params() const { return params_; }

  private:
    SlsParamsOF params_;
    Matrix d22_;
    Matrix m_inv_;  // (I + phi_uy[0] D22)^{-1}
    detail::History beta_;
    detail::History ybar_;
    detail::History uprime_;
};

/// FIR fractional feedback u = Y X^{-1} y realized through the internal
/// signal v = X^{-1} y:
///
///   v[t] = y[t] - sum_{tau=1..T} X[tau] v[t-tau]
///   u[t] = sum_{tau=0..T} Y[tau] v[t-tau]
///
/// Requires X[0] = I, which makes the v recursion explicit.
class FirFeedbackController : public ControllerModel {
  public:
    FirFeedbackController(FirTransferMatrix X, FirTransferMatrix Y);

    int measurement_dim() const override;
    int control_dim() const override;
    void reset() override;
    Vector control(const Vector& y) override;
    std::string describe() const override;

  private:
    FirTransferMatrix x_;
    FirTransferMatrix y_;
    detail::History v_;
};

}  // namespace slskit
