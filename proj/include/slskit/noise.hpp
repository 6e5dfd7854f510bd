#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "slskit/framework.hpp"

namespace slskit {

/// sample(t) == vector at t == fire_time, zero otherwise.
class FixedImpulse : public NoiseModel {
  public:
    FixedImpulse(int fire_time, Vector vector);

    int dim() const override { return static_cast<int>(vector_.size()); }
    void reset() override {}
    Vector sample(int t) override;
    std::string describe() const override;

  private:
    int fire_time_;
    Vector vector_;
};

class ZeroNoise : public NoiseModel {
  public:
    explicit ZeroNoise(int dim);

    int dim() const override { return dim_; }
    void reset() override {}
    Vector sample(int t) override;
    std::string describe() const override { return "zero"; }

  private:
    int dim_;
};

/// Sum of several noise processes of one dimension.
class AdditiveNoise : public NoiseModel {
  public:
    explicit AdditiveNoise(std::vector<std::unique_ptr<NoiseModel>> parts);

    int dim() const override;
    void reset() override;
    Vector sample(int t) override;
    std::string describe() const override;

  private:
    std::vector<std::unique_ptr<NoiseModel>> parts_;
};

/// I.i.d. zero-mean Gaussian samples with a fixed covariance.
///
/// Sampling is mt19937_64 driving an explicit Box-Muller transform, so equal
/// seeds reproduce equal sequences on any platform (std::normal_distribution
/// is not portable across standard libraries). The covariance square root
/// comes from a symmetric eigendecomposition, with negative eigenvalues of a
/// semidefinite input clamped to zero.
class GaussianNoise : public NoiseModel {
  public:
    GaussianNoise(Matrix covariance, uint64_t seed);

    int dim() const override { return static_cast<int>(sqrt_.rows()); }
    void reset() override;
    Vector sample(int t) override;
    std::string describe() const override;

    uint64_t seed() const { return seed_; }

  private:
    double next_normal();

    Matrix sqrt_;
    uint64_t seed_;
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace slskit
