#include "slskit/noise.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slskit/errors.hpp"

namespace slskit {

FixedImpulse::FixedImpulse(int fire_time, Vector vector)
    : fire_time_(fire_time), vector_(std::move(vector)) {
    if (fire_time < 0) {
        throw InvalidArgument("FixedImpulse: fire time must be nonnegative");
    }
    if (vector_.size() == 0) {
        throw InvalidArgument("FixedImpulse: empty impulse vector");
    }
}

Vector FixedImpulse::sample(int t) {
    if (t < 0) {
        throw InvalidArgument("NoiseModel::sample: t must be nonnegative");
    }
    if (t == fire_time_) {
        return vector_;
    }
    return Vector::Zero(vector_.size());
}

std::string FixedImpulse::describe() const {
    std::ostringstream os;
    os << "impulse(t=" << fire_time_ << ",max=" << vector_.cwiseAbs().maxCoeff() << ")";
    return os.str();
}

ZeroNoise::ZeroNoise(int dim) : dim_(dim) {
    if (dim <= 0) {
        throw InvalidArgument("ZeroNoise: dimension must be positive");
    }
}

Vector ZeroNoise::sample(int t) {
    if (t < 0) {
        throw InvalidArgument("NoiseModel::sample: t must be nonnegative");
    }
    return Vector::Zero(dim_);
}

AdditiveNoise::AdditiveNoise(std::vector<std::unique_ptr<NoiseModel>> parts)
    : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw InvalidArgument("AdditiveNoise: needs at least one part");
    }
    for (const auto& p : parts_) {
        if (p->dim() != parts_.front()->dim()) {
            throw DimensionMismatch("AdditiveNoise: parts have different dimensions");
        }
    }
}

int AdditiveNoise::dim() const { return parts_.front()->dim(); }

void AdditiveNoise::reset() {
    for (auto& p : parts_) {
        p->reset();
    }
}

Vector AdditiveNoise::sample(int t) {
    Vector v = parts_.front()->sample(t);
    for (size_t i = 1; i < parts_.size(); ++i) {
        v += parts_[i]->sample(t);
    }
    return v;
}

std::string AdditiveNoise::describe() const {
    std::string s = parts_.front()->describe();
    for (size_t i = 1; i < parts_.size(); ++i) {
        s += "+" + parts_[i]->describe();
    }
    return s;
}

GaussianNoise::GaussianNoise(Matrix covariance, uint64_t seed) : seed_(seed) {
    if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
        throw InvalidArgument("GaussianNoise: covariance must be square and nonempty");
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("GaussianNoise: covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(covariance);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("GaussianNoise: eigendecomposition failed");
    }
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(scale, 1.0)) {
        throw InvalidArgument("GaussianNoise: covariance must be positive semidefinite");
    }
    sqrt_ = es.eigenvectors() *
            es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();
    reset();
}

void GaussianNoise::reset() {
    rng_.seed(seed_);
    have_spare_ = false;
    spare_ = 0.0;
}

double GaussianNoise::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms in (0, 1]; u1 > 0 keeps the log finite.
    const double norm = 1.0 / (static_cast<double>(std::mt19937_64::max()) + 1.0);
    const double u1 = (static_cast<double>(rng_()) + 1.0) * norm;
    const double u2 = static_cast<double>(rng_()) * norm;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

Vector GaussianNoise::sample(int t) {
    if (t < 0) {
        throw InvalidArgument("NoiseModel::sample: t must be nonnegative");
    }
    Vector eta(dim());
    for (int i = 0; i < dim(); ++i) {
        eta(i) = next_normal();
    }
    return sqrt_ * eta;
}

std::string GaussianNoise::describe() const {
    std::ostringstream os;
    os << "gaussian(mt19937_64+box-muller,seed=" << seed_ << ")";
    return os.str();
}

}  // namespace slskit
