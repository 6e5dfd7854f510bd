#pragma once

#include <string>
#include <vector>

#include "slskit/errors.hpp"
#include "slskit/types.hpp"

namespace slskit {

/// Finite sequence of spectral-element matrices M[start..T] representing an
/// FIR truncation of a transfer matrix sum_tau z^-tau M[tau].
///
/// start == 1 encodes a strictly proper map (membership in z^-1 RHinf);
/// start == 0 encodes a proper one (RHinf). Indices outside [start, T] read
/// as zero matrices.
class FirTransferMatrix {
  public:
    FirTransferMatrix(int rows, int cols, int start, int horizon)
        : rows_(rows), cols_(cols), start_(start) {
        if (rows <= 0 || cols <= 0) {
            throw InvalidArgument("FirTransferMatrix: dimensions must be positive");
        }
        if (start != 0 && start != 1) {
            throw InvalidArgument("FirTransferMatrix: start index must be 0 or 1");
        }
        if (horizon < start) {
            throw InvalidArgument("FirTransferMatrix: horizon must be >= start index");
        }
        coeffs_.assign(static_cast<size_t>(horizon - start + 1), Matrix::Zero(rows, cols));
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int start() const { return start_; }
    int horizon() const { return start_ + static_cast<int>(coeffs_.size()) - 1; }

    bool in_range(int tau) const { return tau >= start_ && tau <= horizon(); }

    // Spectral element at tau; zero outside the stored range.
    Matrix coeff(int tau) const {
        if (!in_range(tau)) {
            return Matrix::Zero(rows_, cols_);
        }
        return coeffs_[static_cast<size_t>(tau - start_)];
    }

    Matrix& at(int tau) {
        if (!in_range(tau)) {
            throw InvalidArgument("FirTransferMatrix::at: index " + std::to_string(tau) +
                                  " outside [" + std::to_string(start_) + ", " +
                                  std::to_string(horizon()) + "]");
        }
        return coeffs_[static_cast<size_t>(tau - start_)];
    }

    const Matrix& at(int tau) const {
        return const_cast<FirTransferMatrix*>(this)->at(tau);
    }

    // Squared H2 norm: sum of squared Frobenius norms of the spectral elements.
    double h2_norm_sq() const {
        double s = 0.0;
        for (const auto& m : coeffs_) {
            s += m.squaredNorm();
        }
        return s;
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& m : coeffs_) {
            s = std::max(s, m.cwiseAbs().maxCoeff());
        }
        return s;
    }

  private:
    int rows_, cols_, start_;
    std::vector<Matrix> coeffs_;
};

namespace fir {

// Convolution product (a * b)[k] = sum_j a[j] b[k-j], truncated at max_index.
FirTransferMatrix multiply(const FirTransferMatrix& a, const FirTransferMatrix& b,
                           int max_index);

// Constant (index-0) coefficient times an FIR map.
FirTransferMatrix left_multiply(const Matrix& m, const FirTransferMatrix& a);
FirTransferMatrix right_multiply(const FirTransferMatrix& a, const Matrix& m);

// Coefficients of z * a, i.e. (shift_up(a))[k] = a[k+1]. Result starts at
// max(start-1, 0); the z^-(-1) coefficient of a strictly proper map is zero.
FirTransferMatrix shift_up(const FirTransferMatrix& a);

FirTransferMatrix add(const FirTransferMatrix& a, const FirTransferMatrix& b);
FirTransferMatrix subtract(const FirTransferMatrix& a, const FirTransferMatrix& b);

// Identity at index 0, zero elsewhere.
FirTransferMatrix identity(int n, int horizon);

}  // namespace fir

}  // namespace slskit
