#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/process_sim.hpp"
#include "geostoch/randomness.hpp"

namespace geostoch {

/// Ordered basis A_1..A_d of so(n), orthonormal for <X, Y> = 1/2 Tr(Y^T X).
struct LieAlgebraBasis {
  int n = 0;
  std::vector<Eigen::MatrixXd> matrices;

  int dim() const noexcept { return static_cast<int>(matrices.size()); }
  /// sum_i coeffs_i A_i
  Eigen::MatrixXd combine(const Eigen::VectorXd& coeffs) const;
  /// Coefficients of a skew matrix in this basis.
  Eigen::VectorXd coordinates(const Eigen::MatrixXd& skew) const;
  /// Gram matrix under the 1/2 Tr inner product.
  Eigen::MatrixXd gram() const;
};

/// n = 2: A = [[0, -1], [1, 0]].
/// n = 3: rotations generating x-y, x-z and y-z planes, in that order:
///   A_1 = E_21 - E_12, A_2 = E_31 - E_13, A_3 = E_32 - E_23.
/// n > 3: the same pattern E_ji - E_ij over pairs i < j in lexicographic order.
LieAlgebraBasis so_basis(int n);

inline int so_algebra_dim(int n) { return n * (n - 1) / 2; }

/// Parameters of the Brownian distribution N(g, C) on SO(n). C is the
/// covariance of the algebra coefficients with respect to `basis`.
struct BrownianDistParams {
  Eigen::MatrixXd g;
  ColourSpec colour;
  LieAlgebraBasis basis;

  BrownianDistParams(Eigen::MatrixXd g, const Eigen::MatrixXd& C, LieAlgebraBasis basis);
  /// Canonical basis for the group order of g.
  BrownianDistParams(Eigen::MatrixXd g, const Eigen::MatrixXd& C);

  int n() const noexcept { return basis.n; }
  const Eigen::MatrixXd& C() const noexcept { return colour.covariance(); }
};

/// W_0 = g, W_{k+1} = W_k exp(sqrt(h) sum_i beta_i A_i), beta ~ N(0, C).
/// Points are polar-projected every kReorthogonalizeEvery steps.
Path simulate_left_bm(const BrownianDistParams& params, const SimConfig& cfg, GaussianStream& s);

/// Endpoint W_1 of simulate_left_bm run on [0, 1] with step delta. Consumes
/// the stream exactly as simulate_left_bm does. delta must be 1/K.
Eigen::MatrixXd sample_brownian_dist(const BrownianDistParams& params, double delta, GaussianStream& s);

/// m iid draws; sample i uses stream (seed, i).
std::vector<Eigen::MatrixXd> sample_brownian_set(const BrownianDistParams& params, double delta, std::size_t m,
                                                 std::uint64_t seed);

/// Number of steps K with K delta = 1; throws InputError otherwise.
std::size_t unit_time_steps(double delta);

}  // namespace geostoch
