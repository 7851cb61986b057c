#pragma once

#include <Eigen/Dense>

namespace geostoch {

/// Principal matrix exponential.
///
/// Closed form for 1x1 and 2x2 skew input, Rodrigues for 3x3 skew input,
/// scaling-and-squaring with a Pade approximant otherwise.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

/// Principal logarithm of a rotation matrix. Returns a skew-symmetric matrix
/// whose rotation angles lie in (-pi, pi). Throws DomainError when the
/// rotation has an eigenvalue at -1 (angle pi) or the input is not in SO(n).
Eigen::MatrixXd matrix_log_so(const Eigen::MatrixXd& r);

/// Logarithm of a symmetric positive-definite matrix via eigendecomposition.
Eigen::MatrixXd matrix_log_spd(const Eigen::MatrixXd& p);

struct PolarDecomposition {
  Eigen::MatrixXd u;  // special orthogonal
  Eigen::MatrixXd p;  // symmetric; PSD whenever det(Y) > 0
};

/// Y = U P with U in SO(n). When the orthogonal polar factor would have
/// determinant -1, the singular direction of smallest singular value is
/// flipped so U stays in SO(n); P then carries the sign.
PolarDecomposition polar_decompose(const Eigen::MatrixXd& y);

/// Q factor of the QR decomposition with diag(R) > 0, determinant forced to +1
/// by flipping the last column.
Eigen::MatrixXd qr_q(const Eigen::MatrixXd& y);

/// Nearest special orthogonal matrix (polar factor).
Eigen::MatrixXd project_to_so(const Eigen::MatrixXd& y);

Eigen::MatrixXd skew_part(const Eigen::MatrixXd& a);
Eigen::MatrixXd sym_part(const Eigen::MatrixXd& a);

/// Inner product <X, Y> = 1/2 Tr(Y^T X) on n x n matrices.
double half_trace_inner(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Bi-invariant geodesic distance on SO(n) under the 1/2 Tr metric.
/// For SO(2) this is the absolute rotation angle.
double so_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Fixed-size kernels shared with the Lie group samplers.
Eigen::Matrix2d rotation2(double theta);
Eigen::Matrix3d rodrigues(const Eigen::Matrix3d& skew);

}  // namespace geostoch
