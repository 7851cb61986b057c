#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/liegroup.hpp"

namespace geostoch {

/// Z = 1/2 sum_ij C_ij A_i A_j for any list of generator matrices A_i (an
/// so(n) basis, or the images a_i of a basis under a representation).
Eigen::MatrixXd generator_Z(const Eigen::MatrixXd& C, const std::vector<Eigen::MatrixXd>& generators);
Eigen::MatrixXd generator_Z(const Eigen::MatrixXd& C, const LieAlgebraBasis& basis);

/// Exact inverse of generator_Z on symmetric 3x3 C for the canonical so(3) basis.
Eigen::MatrixXd so3_C_from_Z(const Eigen::MatrixXd& Z);

/// Entrywise mean of equally sized matrices. Fixed-size chunks are summed with
/// Neumaier compensation and the chunk sums are combined in index order, so the
/// result does not depend on how chunks are scheduled.
Eigen::MatrixXd matrix_mean(const std::vector<Eigen::MatrixXd>& samples);

/// How the rotation part is recovered from the sample mean Y.
enum class RecoveryMethod {
  Polar,  // Y = U P, g = U
  QR,     // Y = Q R, g = Q, P taken as the symmetric part of Q^T Y
};

enum class CovarianceStructure { FullZOnly, DiagonalC, FullC };

RecoveryMethod parse_recovery_method(const std::string& s);
CovarianceStructure parse_covariance_structure(const std::string& s);
std::string to_string(RecoveryMethod m);
std::string to_string(CovarianceStructure s);

struct EstimationReport {
  int n = 0;
  Eigen::MatrixXd g_hat;
  Eigen::MatrixXd Z_hat;
  std::optional<Eigen::MatrixXd> C_hat;      // raw
  std::optional<Eigen::MatrixXd> C_hat_psd;  // eigenvalues clamped at 0
  std::optional<double> sigma2_hat;          // SO(2) only
  std::size_t m = 0;
  bool clamped = false;
  // Frobenius misfit between generator_Z(C_hat) and Z_hat (SO(2): between P and
  // its isotropic part). Zero up to rounding whenever C is identifiable.
  double residual = 0.0;
  RecoveryMethod method = RecoveryMethod::Polar;
  CovarianceStructure structure = CovarianceStructure::FullZOnly;
};

/// sigma2_hat = -2 ln(Tr(P) / 2), clamped to 0 (and flagged) when Tr(P)/2 >= 1.
EstimationReport estimate_so2(const std::vector<Eigen::MatrixXd>& samples, RecoveryMethod method = RecoveryMethod::Polar);
/// Z_hat = log P, C_hat = so3_C_from_Z(Z_hat).
EstimationReport estimate_so3(const std::vector<Eigen::MatrixXd>& samples, RecoveryMethod method = RecoveryMethod::Polar);
/// Any n >= 2. n = 2 and n = 3 delegate to the dedicated estimators. For
/// n >= 4 a diagonal C is fitted to diag(Z_hat) by minimum-norm least squares;
/// FullC throws UnsupportedError because the mean has too few entries.
EstimationReport estimate_son(const std::vector<Eigen::MatrixXd>& samples, int n, CovarianceStructure structure,
                              RecoveryMethod method = RecoveryMethod::Polar);

/// Parameter count d + d(d+1)/2 of (g, C) on SO(n), d = n(n-1)/2.
std::size_t brownian_parameter_count(int n);

using Representation = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// f(g)_ij = <A_i, g A_j g^T> under the 1/2 Tr inner product.
Representation adjoint_rep(const LieAlgebraBasis& basis);
/// Derivative of adjoint_rep at the identity: (a_k)_ij = <A_i, [A_k, A_j]>.
std::vector<Eigen::MatrixXd> adjoint_derivatives(const LieAlgebraBasis& basis);

struct RepresentationEstimate {
  Eigen::MatrixXd f_g_hat;
  Eigen::MatrixXd Z_f_hat;
  std::size_t m = 0;
};

/// Mean of f(y_i), then the same recovery as estimate_so3 in the
/// representation space: E f(y) = f(g) exp(Z_f).
RepresentationEstimate estimate_via_representation(const std::vector<Eigen::MatrixXd>& samples,
                                                   const Representation& f,
                                                   RecoveryMethod method = RecoveryMethod::Polar);

}  // namespace geostoch
