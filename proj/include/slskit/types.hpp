#pragma once

#include <Eigen/Dense>

namespace slskit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace slskit
