#pragma once

#include <Eigen/Dense>

namespace xythermo {

/// Pfaffian of a real skew-symmetric matrix.
///
/// Parlett-Reid reduction to tridiagonal form with partial pivoting, O(n^3).
/// The sign is tracked through every row/column interchange, so the result
/// is the signed Pfaffian (Pf(A)^2 = det A). Odd dimension gives 0, the
/// empty matrix gives 1. Skew symmetry is assumed, not checked; only the
/// strictly upper triangle is read. Non-square input throws
/// std::invalid_argument.
double pfaffian(Eigen::MatrixXd a);

/// max |A + A^T|; zero for an exactly skew-symmetric matrix.
double skew_defect(const Eigen::MatrixXd& a);

} // namespace xythermo
