#pragma once

#include <Eigen/Core>

namespace mmsde {

/// A point of R^d. Dimension is carried at runtime.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default tolerance for domain membership in the Euclidean norm.
inline constexpr double kMembershipTol = 1e-8;

/// Smallest resolvent parameter accepted anywhere in the library.
inline constexpr double kMinResolventStep = 1e-15;

}  // namespace mmsde
