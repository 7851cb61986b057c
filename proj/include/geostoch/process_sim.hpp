#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/manifold.hpp"
#include "geostoch/randomness.hpp"

namespace geostoch {

/// SO(n) points produced by repeated exp steps are polar-projected back onto
/// the group after this many steps.
inline constexpr std::size_t kReorthogonalizeEvery = 64;

/// A sampled realisation: strictly increasing times starting at 0 and one
/// manifold point per time.
struct Path {
  ManifoldSpec manifold = ManifoldSpec::euclidean(1);
  std::vector<double> times;
  std::vector<Point> points;

  std::size_t size() const noexcept { return times.size(); }
  const Point& back() const { return points.back(); }

  /// Throws InputError if the structural invariants do not hold.
  void validate() const;
  /// Largest membership error over all points.
  double max_membership_error() const;
};

struct SimConfig {
  double horizon = 1.0;  // T
  double dt = 1e-3;
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;

  void validate() const;
  /// 0, dt, 2dt, ..., T. When T is not a multiple of dt the last step is shorter.
  std::vector<double> grid() const;
};

/// X(0) = 0, X(t + dt) = X(t) + sqrt(dt) W, W standard normal in R^dim.
Path simulate_bm_euclidean(int dim, const SimConfig& cfg, GaussianStream& s);

/// Inserts a Brownian-bridge midpoint in every interval of a uniform Euclidean
/// grid: X(t + h/2) = (X(t) + X(t + h))/2 + (sqrt(h)/2) N(0, 1) per coordinate.
Path refine_bm_midpoint(const Path& path, GaussianStream& s);

/// Geodesic random walk B(t + dt) = Exp_B(sqrt(dt) W), W isotropic on T_B M.
Path simulate_bm_manifold(const ManifoldSpec& m, const Point& p0, const SimConfig& cfg, GaussianStream& s);

/// Per-path streams (stream id = path index) so ensembles are reproducible
/// regardless of execution order.
std::vector<Path> simulate_bm_ensemble(const ManifoldSpec& m, const Point& p0, const SimConfig& cfg);

struct Development {
  Path path;
  std::vector<FrameAtPoint> frames;  // rolling frame at every point
};

/// Rolls S^2 along a planar path: each planar increment (a, b) becomes the
/// step a e1 + b e2 in the current frame, and the frame is parallel
/// transported along the step.
Development develop_with_frames(const Point& p0, const FrameAtPoint& frame0, const Path& plane_path);
Path develop(const Point& p0, const FrameAtPoint& frame0, const Path& plane_path);

/// Inverse of develop for piecewise-geodesic sphere paths.
Development antidevelop_with_frames(const Path& sphere_path, const FrameAtPoint& frame0);
Path antidevelop(const Path& sphere_path, const FrameAtPoint& frame0);

using DriftField = std::function<Tangent(double t, const Point& x)>;

/// X(t + dt) = Exp_X(dt b(t, X) + sqrt(dt) noise_scale W). One tangent
/// Gaussian is drawn per step even when noise_scale is zero.
Path simulate_state_space(const ManifoldSpec& m, const Point& p0, const DriftField& drift, double noise_scale,
                          const SimConfig& cfg, GaussianStream& s);

using ObservationMap = std::function<Eigen::VectorXd(const Point& x)>;

/// Y(t + dt) = Exp_Y(lift(g(X(t + dt)) - g(X(t))) + sqrt(dt) noise_scale W).
/// Euclidean observation spaces add increments directly. On S^2 the increment
/// is expressed in a frame transported along the observation path as in
/// develop; frame0 defaults to canonical_sphere_frame(y0).
Path simulate_observation(const ManifoldSpec& obs, const Point& y0, const Path& state_path, const ObservationMap& g,
                          double noise_scale, GaussianStream& s,
                          const std::optional<FrameAtPoint>& frame0 = std::nullopt);

/// Rendering helper: inserts `subdivisions - 1` geodesically interpolated
/// points inside each interval.
Path interpolate_path(const Path& path, int subdivisions);

}  // namespace geostoch
