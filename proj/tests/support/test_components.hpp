#pragma once

// Small concrete components for framework and simulator tests.

#include "slskit/framework.hpp"

namespace testkit {

using namespace slskit;

class ZeroController : public ControllerModel {
  public:
    ZeroController(int ny, int nu) : ny_(ny), nu_(nu) {}

    int measurement_dim() const override { return ny_; }
    int control_dim() const override { return nu_; }
    void reset() override {}
    Vector control(const Vector&) override { return Vector::Zero(nu_); }
    std::string describe() const override { return "zero-controller"; }

  private:
    int ny_, nu_;
};

class StaticGainController : public ControllerModel {
  public:
    explicit StaticGainController(Matrix k) : k_(std::move(k)) {}

    int measurement_dim() const override { return static_cast<int>(k_.cols()); }
    int control_dim() const override { return static_cast<int>(k_.rows()); }
    void reset() override {}
    Vector control(const Vector& y) override { return k_ * y; }
    std::string describe() const override { return "static-gain"; }

  private:
    Matrix k_;
};

}  // namespace testkit
