#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "geostoch/manifold.hpp"

namespace geostoch {

/// Reproducible stream of standard normal variates addressed by
/// (master seed, stream id). Two streams with the same address yield the same
/// sequence; streams with different ids are seeded independently through a
/// seed sequence over both words. Single owner: not safe to draw from two
/// threads at once.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t master_seed, std::uint64_t stream_id);

  double next();
  Eigen::VectorXd next_vector(Eigen::Index n);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

inline double next_gaussian(GaussianStream& s) { return s.next(); }

/// Covariance C of a coloured Gaussian driver together with a factor L, L L^T = C.
/// Slightly negative eigenvalues (rounding) are clamped to zero.
class ColourSpec {
 public:
  explicit ColourSpec(const Eigen::MatrixXd& covariance);

  static ColourSpec identity(Eigen::Index d) { return ColourSpec(Eigen::MatrixXd::Identity(d, d)); }

  const Eigen::MatrixXd& covariance() const noexcept { return c_; }
  const Eigen::MatrixXd& factor() const noexcept { return l_; }
  Eigen::Index dim() const noexcept { return c_.rows(); }
  bool is_zero() const noexcept { return zero_; }

 private:
  Eigen::MatrixXd c_;
  Eigen::MatrixXd l_;
  bool zero_ = false;
};

/// Isotropic standard Gaussian on T_p M. Draws one ambient normal per ambient
/// coordinate and projects. On SO(n) the skew part is rescaled by sqrt(2) so
/// the coefficients in the 1/2 Tr-orthonormal basis of so(n) are N(0, 1).
Tangent sample_tangent_gaussian(const ManifoldSpec& m, const Point& p, GaussianStream& s);

/// beta = L z with z standard normal.
Eigen::VectorXd sample_coloured(const ColourSpec& spec, GaussianStream& s);

}  // namespace geostoch
