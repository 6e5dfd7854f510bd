#include "slskit/fir.hpp"

#include <algorithm>

namespace slskit::fir {

FirTransferMatrix multiply(const FirTransferMatrix& a, const FirTransferMatrix& b,
                           int max_index) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("fir::multiply: inner dimensions disagree");
    }
    const int start = std::min(a.start() + b.start(), max_index);
    FirTransferMatrix out(a.rows(), b.cols(), start > 0 ? 1 : 0, max_index);
    for (int k = out.start(); k <= max_index; ++k) {
        Matrix acc = Matrix::Zero(a.rows(), b.cols());
        const int jlo = std::max(a.start(), k - b.horizon());
        const int jhi = std::min(a.horizon(), k - b.start());
        for (int j = jlo; j <= jhi; ++j) {
            acc.noalias() += a.at(j) * b.at(k - j);
        }
        out.at(k) = acc;
    }
    return out;
}

FirTransferMatrix left_multiply(const Matrix& m, const FirTransferMatrix& a) {
    if (m.cols() != a.rows()) {
        throw DimensionMismatch("fir::left_multiply: inner dimensions disagree");
    }
    FirTransferMatrix out(static_cast<int>(m.rows()), a.cols(), a.start(), a.horizon());
    for (int k = a.start(); k <= a.horizon(); ++k) {
        out.at(k) = m * a.at(k);
    }
    return out;
}

FirTransferMatrix right_multiply(const FirTransferMatrix& a, const Matrix& m) {
    if (a.cols() != m.rows()) {
        throw DimensionMismatch("fir::right_multiply: inner dimensions disagree");
    }
    FirTransferMatrix out(a.rows(), static_cast<int>(m.cols()), a.start(), a.horizon());
    for (int k = a.start(); k <= a.horizon(); ++k) {
        out.at(k) = a.at(k) * m;
    }
    return out;
}

FirTransferMatrix shift_up(const FirTransferMatrix& a) {
    const int start = std::max(a.start() - 1, 0);
    const int horizon = std::max(a.horizon() - 1, start);
    FirTransferMatrix out(a.rows(), a.cols(), start, horizon);
    for (int k = start; k <= horizon; ++k) {
        out.at(k) = a.coeff(k + 1);
    }
    return out;
}

FirTransferMatrix add(const FirTransferMatrix& a, const FirTransferMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("fir::add: shapes disagree");
    }
    FirTransferMatrix out(a.rows(), a.cols(), std::min(a.start(), b.start()),
                          std::max(a.horizon(), b.horizon()));
    for (int k = out.start(); k <= out.horizon(); ++k) {
        out.at(k) = a.coeff(k) + b.coeff(k);
    }
    return out;
}

FirTransferMatrix subtract(const FirTransferMatrix& a, const FirTransferMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("fir::subtract: shapes disagree");
    }
    FirTransferMatrix out(a.rows(), a.cols(), std::min(a.start(), b.start()),
                          std::max(a.horizon(), b.horizon()));
    for (int k = out.start(); k <= out.horizon(); ++k) {
        out.at(k) = a.coeff(k) - b.coeff(k);
    }
    return out;
}

FirTransferMatrix identity(int n, int horizon) {
    FirTransferMatrix out(n, n, 0, horizon);
    out.at(0) = Matrix::Identity(n, n);
    return out;
}

}  // namespace slskit::fir
