#include "slskit/controllers.hpp"

#include <Eigen/LU>
#include <sstream>

#include "slskit/errors.hpp"

namespace slskit {

namespace detail {

History::History(int dim, int depth) : zero_(Vector::Zero(dim)) {
    ring_.assign(static_cast<size_t>(depth), zero_);
}

void History::reset() {
    for (auto& v : ring_) {
        v.setZero();
    }
    head_ = 0;
    count_ = 0;
}

void History::push(const Vector& v) {
    head_ = (head_ + 1) % static_cast<int>(ring_.size());
    ring_[static_cast<size_t>(head_)] = v;
    ++count_;
}

const Vector& History::back(int steps) const {
    if (steps < 0 || steps >= count_ || steps >= static_cast<int>(ring_.size())) {
        return zero_;
    }
    const int n = static_cast<int>(ring_.size());
    return ring_[static_cast<size_t>(((head_ - steps) % n + n) % n)];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State feedback
// ---------------------------------------------------------------------------

SfSlsController::SfSlsController(SlsParamsSF params)
    : params_(std::move(params)),
      what_(params_.phi_x.cols(), params_.phi_x.horizon() + 2),
      xhat_(Vector::Zero(params_.phi_x.rows())) {
    if (params_.phi_x.start() != 1 || params_.phi_u.start() != 1) {
        throw ConstructionError("SfSlsController: phi_x and phi_u must be strictly proper");
    }
    if (params_.phi_x.rows() != params_.phi_x.cols() ||
        params_.phi_u.cols() != params_.phi_x.cols() ||
        params_.phi_u.horizon() != params_.phi_x.horizon()) {
        throw ConstructionError("SfSlsController: inconsistent parameter shapes");
    }
}

int SfSlsController::measurement_dim() const { return params_.phi_x.rows(); }
int SfSlsController::control_dim() const { return params_.phi_u.rows(); }

void SfSlsController::reset() {
    what_.reset();
    xhat_.setZero();
}

Vector SfSlsController::control(const Vector& y) {
    if (y.size() != measurement_dim()) {
        throw DimensionMismatch("SfSlsController::control: wrong measurement dimension");
    }
    const int T = params_.phi_x.horizon();
    what_.push(y - xhat_);  // what[t-1]

    Vector u = Vector::Zero(control_dim());
    for (int tau = 1; tau <= T; ++tau) {
        u.noalias() += params_.phi_u.at(tau) * what_.back(tau - 1);
    }
    Vector xhat_next = Vector::Zero(params_.phi_x.rows());
    for (int tau = 2; tau <= T; ++tau) {
        xhat_next.noalias() += params_.phi_x.at(tau) * what_.back(tau - 2);
    }
    xhat_ = xhat_next;
    return u;
}

std::string SfSlsController::describe() const {
    std::ostringstream os;
    os << "sls-sf(T=" << params_.phi_x.horizon() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Output feedback
// ---------------------------------------------------------------------------

OfSlsController::OfSlsController(SlsParamsOF params, Matrix D22)
    : params_(std::move(params)),
      d22_(std::move(D22)),
      beta_(params_.phi_xx.cols(), params_.phi_xx.horizon() + 2),
      ybar_(params_.phi_xy.cols(), params_.phi_xx.horizon() + 2),
      uprime_(params_.phi_ux.rows(), params_.phi_xx.horizon() + 2) {
    const int T = params_.phi_xx.horizon();
    if (params_.phi_xx.start() != 1 || params_.phi_ux.start() != 1 ||
        params_.phi_xy.start() != 1 || params_.phi_uy.start() != 0) {
        throw ConstructionError("OfSlsController: wrong start indices");
    }
    if (params_.phi_ux.horizon() != T || params_.phi_xy.horizon() != T ||
        params_.phi_uy.horizon() != T) {
        throw ConstructionError("OfSlsController: blocks must share one horizon");
    }
    const int nx = params_.phi_xx.rows();
    const int ny = params_.phi_xy.cols();
    const int nu = params_.phi_ux.rows();
    if (params_.phi_xx.cols() != nx || params_.phi_ux.cols() != nx ||
        params_.phi_xy.rows() != nx || params_.phi_uy.rows() != nu ||
        params_.phi_uy.cols() != ny) {
        throw ConstructionError("OfSlsController: inconsistent parameter shapes");
    }
    if (d22_.rows() != ny || d22_.cols() != nu) {
        throw ConstructionError("OfSlsController: D22 must be ny x nu");
    }
    const Matrix m = Matrix::Identity(nu, nu) + params_.phi_uy.at(0) * d22_;
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) {
        throw ConstructionError("OfSlsController: I + phi_uy[0] D22 is singular");
    }
    m_inv_ = lu.inverse();
}

int OfSlsController::measurement_dim() const { return params_.phi_xy.cols(); }
int OfSlsController::control_dim() const { return params_.phi_ux.rows(); }

void OfSlsController::reset() {
    beta_.reset();
    ybar_.reset();
    uprime_.reset();
}

Vector OfSlsController::control(const Vector& y) {
    if (y.size() != measurement_dim()) {
        throw DimensionMismatch("OfSlsController::control: wrong measurement dimension");
    }
    const int T = params_.phi_xx.horizon();

    Vector uprime = Vector::Zero(control_dim());
    for (int tau = 1; tau <= T; ++tau) {
        uprime.noalias() += params_.phi_ux.at(tau) * beta_.back(tau - 1);
        uprime.noalias() += params_.phi_uy.at(tau) * ybar_.back(tau - 1);
    }
    uprime_.push(uprime);

    const Vector u = m_inv_ * (uprime + params_.phi_uy.at(0) * y);
    const Vector ybar = y - d22_ * u;
    ybar_.push(ybar);

    Vector beta = Vector::Zero(params_.phi_xx.cols());
    for (int tau = 2; tau <= T; ++tau) {
        beta.noalias() -= params_.phi_xx.at(tau) * beta_.back(tau - 2);
    }
    for (int tau = 1; tau <= T; ++tau) {
        beta.noalias() -= params_.phi_xy.at(tau) * ybar_.back(tau - 1);
    }
    beta_.push(beta);
    return u;
}

std::string OfSlsController::describe() const {
    std::ostringstream os;
    os << "sls-of(T=" << params_.phi_xx.horizon() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// FIR fractional feedback (IOP)
// ---------------------------------------------------------------------------

FirFeedbackController::FirFeedbackController(FirTransferMatrix X, FirTransferMatrix Y)
    : x_(std::move(X)), y_(std::move(Y)), v_(x_.cols(), x_.horizon() + 2) {
    if (x_.start() != 0 || y_.start() != 0) {
        throw ConstructionError("FirFeedbackController: X and Y must start at index 0");
    }
    if (x_.rows() != x_.cols() || y_.cols() != x_.rows() || y_.horizon() != x_.horizon()) {
        throw ConstructionError("FirFeedbackController: inconsistent parameter shapes");
    }
    const Matrix x0 = x_.at(0);
    if ((x0 - Matrix::Identity(x0.rows(), x0.cols())).cwiseAbs().maxCoeff() > 1e-9) {
        throw ConstructionError("FirFeedbackController: X[0] must be the identity");
    }
}

int FirFeedbackController::measurement_dim() const { return x_.rows(); }
int FirFeedbackController::control_dim() const { return y_.rows(); }

void FirFeedbackController::reset() { v_.reset(); }

Vector FirFeedbackController::control(const Vector& y) {
    if (y.size() != measurement_dim()) {
        throw DimensionMismatch("FirFeedbackController::control: wrong measurement dimension");
    }
    const int T = x_.horizon();
    Vector v = y;
    for (int tau = 1; tau <= T; ++tau) {
        v.noalias() -= x_.at(tau) * v_.back(tau - 1);
    }
    v_.push(v);
    Vector u = Vector::Zero(control_dim());
    for (int tau = 0; tau <= T; ++tau) {
        u.noalias() += y_.at(tau) * v_.back(tau);
    }
    return u;
}

std::string FirFeedbackController::describe() const {
    std::ostringstream os;
    os << "fir-feedback(T=" << x_.horizon() << ")";
    return os.str();
}

}  // namespace slskit
