#pragma once

#include <Eigen/Core>

namespace cbim {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Incoming edge weights of a node must sum to 1 within this tolerance
// once weights have been assigned.
inline constexpr Scalar kWeightSumTol = 1e-9;

}  // namespace cbim
