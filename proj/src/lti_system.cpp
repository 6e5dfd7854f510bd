#include "slskit/lti_system.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "slskit/errors.hpp"

namespace slskit {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw DimensionMismatch("LTISystem: " + what);
    }
}

}  // namespace

LTISystem::LTISystem(Matrix A, Matrix B1, Matrix B2, Matrix C1, Matrix D11, Matrix D12,
                     Matrix C2, Matrix D21, Matrix D22)
    : A_(std::move(A)),
      B1_(std::move(B1)),
      B2_(std::move(B2)),
      C1_(std::move(C1)),
      D11_(std::move(D11)),
      D12_(std::move(D12)),
      C2_(std::move(C2)),
      D21_(std::move(D21)),
      D22_(std::move(D22)) {
    const int nx = static_cast<int>(A_.rows());
    require(A_.cols() == nx, "A must be square");
    require(B1_.rows() == nx, "B1 row count must equal state dimension");
    require(B2_.rows() == nx, "B2 row count must equal state dimension");
    const int nw = static_cast<int>(B1_.cols());
    const int nu = static_cast<int>(B2_.cols());
    require(C1_.cols() == nx, "C1 column count must equal state dimension");
    require(C2_.cols() == nx, "C2 column count must equal state dimension");
    const int nz = static_cast<int>(C1_.rows());
    const int ny = static_cast<int>(C2_.rows());
    require(D11_.rows() == nz && D11_.cols() == nw, "D11 must be nz x nw");
    require(D12_.rows() == nz && D12_.cols() == nu, "D12 must be nz x nu");
    require(D21_.rows() == ny && D21_.cols() == nw, "D21 must be ny x nw");
    require(D22_.rows() == ny && D22_.cols() == nu, "D22 must be ny x nu");
    dims_ = SystemDims{nx, nu, nw, ny, nz};
    x_ = Vector::Zero(nx);
}

void LTISystem::set_state(const Vector& x) {
    if (x.size() != dims_.nx) {
        throw DimensionMismatch("LTISystem::set_state: wrong state dimension");
    }
    x_ = x;
}

Vector LTISystem::measure(const Vector& w) const {
    if (w.size() != dims_.nw) {
        throw DimensionMismatch("LTISystem::measure: wrong noise dimension");
    }
    return C2_ * x_ + D21_ * w;
}

SystemModel::StepOutput LTISystem::step(const Vector& u, const Vector& w) {
    if (u.size() != dims_.nu) {
        throw DimensionMismatch("LTISystem::step: wrong control dimension");
    }
    if (w.size() != dims_.nw) {
        throw DimensionMismatch("LTISystem::step: wrong noise dimension");
    }
    StepOutput out;
    out.y = C2_ * x_ + D21_ * w + D22_ * u;
    out.zbar = C1_ * x_ + D11_ * w + D12_ * u;
    out.x_next = A_ * x_ + B1_ * w + B2_ * u;
    x_ = out.x_next;
    return out;
}

std::string LTISystem::describe() const {
    std::ostringstream os;
    os << "lti(nx=" << dims_.nx << ",nu=" << dims_.nu << ",nw=" << dims_.nw
       << ",ny=" << dims_.ny << ",nz=" << dims_.nz << ")";
    return os.str();
}

namespace {

Matrix chain_a(int n) {
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = (i == 0 || i == n - 1) ? 0.4 : 0.3;
    }
    for (int i = 0; i + 1 < n; ++i) {
        A(i, i + 1) = 0.1;
        A(i + 1, i) = 0.1;
    }
    return A;
}

// zbar = [x; u]: C1 = [I; 0], D12 = [0; I].
void chain_regulated(int n, Matrix& C1, Matrix& D12) {
    C1 = Matrix::Zero(2 * n, n);
    C1.topRows(n) = Matrix::Identity(n, n);
    D12 = Matrix::Zero(2 * n, n);
    D12.bottomRows(n) = Matrix::Identity(n, n);
}

}  // namespace

LTISystem make_chain(int n) {
    if (n < 2) {
        throw InvalidArgument("make_chain: need at least 2 nodes, got " + std::to_string(n));
    }
    Matrix C1, D12;
    chain_regulated(n, C1, D12);
    const Matrix I = Matrix::Identity(n, n);
    return LTISystem(chain_a(n), I, I, C1, Matrix::Zero(2 * n, n), D12, I,
                     Matrix::Zero(n, n), Matrix::Zero(n, n));
}

LTISystem make_chain_measured(int n, double sigma) {
    if (n < 2) {
        throw InvalidArgument("make_chain_measured: need at least 2 nodes, got " +
                              std::to_string(n));
    }
    if (sigma < 0.0) {
        throw InvalidArgument("make_chain_measured: sigma must be nonnegative");
    }
    Matrix C1, D12;
    chain_regulated(n, C1, D12);
    const Matrix I = Matrix::Identity(n, n);
    Matrix B1 = Matrix::Zero(n, 2 * n);
    B1.leftCols(n) = I;
    Matrix D21 = Matrix::Zero(n, 2 * n);
    D21.rightCols(n) = sigma * I;
    return LTISystem(chain_a(n), B1, I, C1, Matrix::Zero(2 * n, 2 * n), D12, I, D21,
                     Matrix::Zero(n, n));
}

double spectral_radius(const Matrix& A) {
    if (A.rows() != A.cols()) {
        throw DimensionMismatch("spectral_radius: matrix must be square");
    }
    if (A.rows() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("spectral_radius: eigensolver did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

int chain_center_node(int n) {
    return (n + 1) / 2 - 1;
}

}  // namespace slskit
