#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/process_sim.hpp"
#include "geostoch/randomness.hpp"

namespace geostoch {

/// 0 = t_0 < t_1 < ... < t_N = T.
struct Partition {
  std::vector<double> points;
  bool uniform = false;
  double mesh = 0.0;

  static Partition uniform_grid(double horizon, std::size_t intervals);
  /// Validates strict monotonicity and a zero origin.
  static Partition from_points(std::vector<double> points);

  std::size_t intervals() const noexcept { return points.empty() ? 0 : points.size() - 1; }
};

// Partition sums over integrand samples x and integrator samples y taken on the
// same grid. Only grid samples are accepted, so the integrand is adapted by
// construction. Sums are Neumaier-compensated.

/// sum_k x(t_k) (y(t_{k+1}) - y(t_k))
double ito_sum(std::span<const double> x, std::span<const double> y);
/// sum_k x(t_{k+1}) (y(t_{k+1}) - y(t_k))
double right_endpoint_sum(std::span<const double> x, std::span<const double> y);
/// sum_k (x(t_k) + x(t_{k+1}))/2 (y(t_{k+1}) - y(t_k))
double stratonovich_sum(std::span<const double> x, std::span<const double> y);
/// sum_k (x(t_{k+1}) - x(t_k)) (y(t_{k+1}) - y(t_k))
double cross_variation(std::span<const double> x, std::span<const double> y);
/// sum_k (y(t_{k+1}) - y(t_k))^2
double quadratic_variation(std::span<const double> y);
double quadratic_variation(std::span<const double> y, const Partition& partition);

/// Scalar Brownian motion sampled on an arbitrary partition.
std::vector<double> sample_bm_on(const Partition& partition, GaussianStream& s);

/// dX = b(t, X) dt + Sigma(t, X) dB with X in R^{state_dim}, B in R^{driver_dim}.
struct DiffusionSpec {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> drift;
  std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)> diffusion;
  int state_dim = 1;
  int driver_dim = 1;

  /// Evaluates both coefficients at (t, x) and checks their shapes.
  void validate(double t, const Eigen::VectorXd& x) const;
};

/// Brownian increments on a time grid: column k holds B(t_{k+1}) - B(t_k),
/// drawn as sqrt(h) z one column at a time.
Eigen::MatrixXd brownian_increments(const std::vector<double>& times, int driver_dim, GaussianStream& s);
/// Sums groups of `factor` consecutive increment columns (coarser coupled grid).
Eigen::MatrixXd coarsen_increments(const Eigen::MatrixXd& increments, std::size_t factor);

/// X_{k+1} = X_k + b(t_k, X_k) h + Sigma(t_k, X_k) dB_k. Throws DivergedError
/// when the state stops being finite.
Path euler_maruyama(const DiffusionSpec& spec, const Eigen::VectorXd& x0, const SimConfig& cfg, GaussianStream& s);
Path euler_maruyama_driven(const DiffusionSpec& spec, const Eigen::VectorXd& x0, const std::vector<double>& times,
                           const Eigen::MatrixXd& increments);

/// Scalar Stratonovich coefficient sigma(t, x) with its x-derivative.
struct ScalarStratonovich {
  std::function<double(double, double)> sigma;
  std::function<double(double, double)> dsigma_dx;
};

/// Ito form of dX = sigma(t, X) o dB: drift sigma sigma' / 2, diffusion sigma.
DiffusionSpec strat_to_ito(const ScalarStratonovich& sde);

/// Predictor-corrector for dX = sigma(t, X) o dB:
///   X~ = X + sigma(t, X) dB,  X' = X + (sigma(t, X) + sigma(t + h, X~)) dB / 2.
Path heun_stratonovich(const ScalarStratonovich& sde, double x0, const SimConfig& cfg, GaussianStream& s);
Path heun_stratonovich_driven(const ScalarStratonovich& sde, double x0, const std::vector<double>& times,
                              const Eigen::MatrixXd& increments);

/// Scalar coordinate of a one-dimensional Euclidean path.
std::vector<double> scalar_samples(const Path& path);

}  // namespace geostoch
