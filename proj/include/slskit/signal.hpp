#pragma once

#include <vector>

#include "slskit/errors.hpp"
#include "slskit/types.hpp"

namespace slskit {

// Time-indexed sequence of real vectors of a fixed dimension.
class Signal {
  public:
    explicit Signal(int dimension) : dimension_(dimension) {
        if (dimension < 0) {
            throw InvalidArgument("Signal dimension must be nonnegative");
        }
    }

    int dimension() const { return dimension_; }
    int length() const { return static_cast<int>(values_.size()); }

    void push_back(const Vector& v) {
        if (v.size() != dimension_) {
            throw DimensionMismatch("Signal::push_back: vector length " +
                                    std::to_string(v.size()) + " != dimension " +
                                    std::to_string(dimension_));
        }
        values_.push_back(v);
    }

    const Vector& operator[](int t) const { return values_.at(static_cast<size_t>(t)); }

    const std::vector<Vector>& values() const { return values_; }

    // Columns are time steps, rows are signal entries.
    Matrix as_matrix() const {
        Matrix m = Matrix::Zero(dimension_, length());
        for (int t = 0; t < length(); ++t) {
            m.col(t) = values_[static_cast<size_t>(t)];
        }
        return m;
    }

  private:
    int dimension_;
    std::vector<Vector> values_;
};

}  // namespace slskit
