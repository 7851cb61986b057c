#include "geostoch/process_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geostoch/errors.hpp"
#include "geostoch/parallel.hpp"

namespace geostoch {

namespace {

const ManifoldSpec kS2 = ManifoldSpec::sphere(3);

void check_frame(const Point& p, const FrameAtPoint& frame, std::size_t expected, const char* who) {
  if (frame.vectors.size() != expected) {
    std::ostringstream os;
    os << who << ": frame needs " << expected << " vectors, got " << frame.vectors.size();
    throw InputError(os.str());
  }
  for (const auto& e : frame.vectors) {
    if (e.size() != p.size() || std::abs(e.dot(p)) > kMembershipTol) {
      throw InputError(std::string(who) + ": frame vector is not tangent at the base point");
    }
  }
  if (frame.orthonormality_error() > kMembershipTol) {
    throw InputError(std::string(who) + ": frame is not orthonormal");
  }
}

// Transport every frame vector along exp_map(p, v), then clean up rounding so
// the frame stays tangent at the (renormalised) new point and orthonormal.
FrameAtPoint transport_frame(const FrameAtPoint& frame, const Tangent& v, const Point& next) {
  FrameAtPoint out{next, {}};
  out.vectors.reserve(frame.vectors.size());
  for (const auto& e : frame.vectors) {
    Tangent f = parallel_transport_sphere(frame.base, v, e);
    f -= f.dot(next) * next;
    for (const auto& g : out.vectors) f -= f.dot(g) * g;
    out.vectors.push_back(f / f.norm());
  }
  return out;
}

Tangent lift(const FrameAtPoint& frame, const Eigen::VectorXd& coords) {
  Tangent v = Tangent::Zero(frame.base.size());
  for (std::size_t i = 0; i < frame.vectors.size(); ++i) v += coords(static_cast<Eigen::Index>(i)) * frame.vectors[i];
  return v;
}

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 2) return true;
  const double h = t[1] - t[0];
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    if (std::abs((t[k + 1] - t[k]) - h) > 1e-9 * h) return false;
  }
  return true;
}

}  // namespace

void Path::validate() const {
  if (times.empty() || times.size() != points.size()) throw InputError("path needs matching non-empty times and points");
  if (times.front() != 0.0) throw InputError("path times must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw InputError("path times must be strictly increasing");
  }
  for (const auto& p : points) require_on_manifold(manifold, p, "Path");
}

double Path::max_membership_error() const {
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, membership_error(manifold, p));
  return worst;
}

void SimConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("step dt must be positive");
  if (dt > horizon * (1.0 + 1e-12)) throw InputError("step dt must not exceed the horizon T");
  if (n_paths < 1) throw InputError("need at least one path");
}

std::vector<double> SimConfig::grid() const {
  validate();
  const double ratio = horizon / dt;
  const double nearest = std::round(ratio);
  const auto steps = static_cast<std::size_t>(std::abs(ratio - nearest) <= 1e-9 * ratio ? nearest : std::ceil(ratio));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) t[k] = static_cast<double>(k) * dt;
  t[steps] = horizon;
  return t;
}

Path simulate_bm_euclidean(int dim, const SimConfig& cfg, GaussianStream& s) {
  if (dim < 1) throw InputError("simulate_bm_euclidean: dim must be >= 1");
  Path path{ManifoldSpec::euclidean(dim), cfg.grid(), {}};
  path.points.reserve(path.times.size());
  Point x = Point::Zero(dim);
  path.points.push_back(x);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double h = path.times[k] - path.times[k - 1];
    x += std::sqrt(h) * s.next_vector(dim);
    path.points.push_back(x);
  }
  return path;
}

Path refine_bm_midpoint(const Path& path, GaussianStream& s) {
  if (!path.manifold.is_euclidean()) throw InputError("refine_bm_midpoint: path must be Euclidean");
  if (!is_uniform(path.times)) throw InputError("refine_bm_midpoint: grid is not uniform");
  Path out{path.manifold, {}, {}};
  const std::size_t n = path.size();
  out.times.reserve(2 * n - 1);
  out.points.reserve(2 * n - 1);
  const int dim = path.manifold.n();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = path.times[k + 1] - path.times[k];
    out.times.push_back(path.times[k]);
    out.points.push_back(path.points[k]);
    out.times.push_back(path.times[k] + 0.5 * h);
    out.points.push_back(0.5 * (path.points[k] + path.points[k + 1]) + 0.5 * std::sqrt(h) * s.next_vector(dim));
  }
  out.times.push_back(path.times.back());
  out.points.push_back(path.points.back());
  return out;
}

Path simulate_bm_manifold(const ManifoldSpec& m, const Point& p0, const SimConfig& cfg, GaussianStream& s) {
  return simulate_state_space(m, p0, nullptr, 1.0, cfg, s);
}

std::vector<Path> simulate_bm_ensemble(const ManifoldSpec& m, const Point& p0, const SimConfig& cfg) {
  cfg.validate();
  require_on_manifold(m, p0, "simulate_bm_ensemble");
  std::vector<std::optional<Path>> slots(cfg.n_paths);
  for_each_index(cfg.n_paths, [&](std::size_t i) {
    GaussianStream stream(cfg.seed, i);
    slots[i] = simulate_bm_manifold(m, p0, cfg, stream);
  });
  std::vector<Path> out;
  out.reserve(slots.size());
  for (auto& p : slots) out.push_back(std::move(*p));
  return out;
}

Development develop_with_frames(const Point& p0, const FrameAtPoint& frame0, const Path& plane_path) {
  if (p0.size() != 3 || !plane_path.manifold.is_euclidean() || plane_path.manifold.n() != 2) {
    throw UnsupportedError("develop: only planar paths rolled onto S^2 are supported");
  }
  require_on_manifold(kS2, p0, "develop");
  check_frame(p0, frame0, 2, "develop");
  if (plane_path.size() == 0) throw InputError("develop: empty plane path");

  Development out{Path{kS2, plane_path.times, {}}, {}};
  out.path.points.reserve(plane_path.size());
  out.frames.reserve(plane_path.size());
  FrameAtPoint frame{p0, frame0.vectors};
  out.path.points.push_back(p0);
  out.frames.push_back(frame);
  for (std::size_t k = 1; k < plane_path.size(); ++k) {
    const Eigen::VectorXd step = plane_path.points[k] - plane_path.points[k - 1];
    const Tangent v = lift(frame, step);
    const Point next = exp_map(kS2, frame.base, v);
    frame = transport_frame(frame, v, next);
    out.path.points.push_back(next);
    out.frames.push_back(frame);
  }
  return out;
}

Path develop(const Point& p0, const FrameAtPoint& frame0, const Path& plane_path) {
  return develop_with_frames(p0, frame0, plane_path).path;
}

Development antidevelop_with_frames(const Path& sphere_path, const FrameAtPoint& frame0) {
  if (!(sphere_path.manifold == kS2)) throw UnsupportedError("antidevelop: only S^2 paths are supported");
  if (sphere_path.size() == 0) throw InputError("antidevelop: empty path");
  const Point& p0 = sphere_path.points.front();
  require_on_manifold(kS2, p0, "antidevelop");
  check_frame(p0, frame0, 2, "antidevelop");

  Development out{Path{ManifoldSpec::euclidean(2), sphere_path.times, {}}, {}};
  out.path.points.reserve(sphere_path.size());
  FrameAtPoint frame{p0, frame0.vectors};
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  out.path.points.push_back(x);
  out.frames.push_back(frame);
  for (std::size_t k = 1; k < sphere_path.size(); ++k) {
    const Point& next = sphere_path.points[k];
    const Tangent v = log_map(kS2, frame.base, next);
    x += Eigen::Vector2d(v.dot(frame.vectors[0]), v.dot(frame.vectors[1]));
    frame = transport_frame(frame, v, next / next.norm());
    out.path.points.push_back(x);
    out.frames.push_back(frame);
  }
  return out;
}

Path antidevelop(const Path& sphere_path, const FrameAtPoint& frame0) {
  return antidevelop_with_frames(sphere_path, frame0).path;
}

Path simulate_state_space(const ManifoldSpec& m, const Point& p0, const DriftField& drift, double noise_scale,
                          const SimConfig& cfg, GaussianStream& s) {
  require_on_manifold(m, p0, "simulate_state_space");
  Path path{m, cfg.grid(), {}};
  path.points.reserve(path.times.size());
  Point x = p0;
  path.points.push_back(x);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    const double t = path.times[k - 1];
    const double h = path.times[k] - t;
    Tangent v = (std::sqrt(h) * noise_scale) * sample_tangent_gaussian(m, x, s);
    if (drift) {
      const Tangent b = drift(t, x);
      if (b.size() != m.ambient_size()) throw InputError("simulate_state_space: drift has the wrong dimension");
      const double err = tangency_error(m, x, b);
      if (err > kMembershipTol * std::max(1.0, b.norm())) {
        std::ostringstream os;
        os << "simulate_state_space: drift is not tangent at step " << k - 1 << " (error " << err << ")";
        throw InputError(os.str());
      }
      v += h * b;
    }
    x = exp_map(m, x, v);
    if (m.is_so() && k % kReorthogonalizeEvery == 0) x = retract_to_manifold(m, x);
    path.points.push_back(x);
  }
  return path;
}

Path simulate_observation(const ManifoldSpec& obs, const Point& y0, const Path& state_path, const ObservationMap& g,
                          double noise_scale, GaussianStream& s, const std::optional<FrameAtPoint>& frame0) {
  if (obs.is_so()) throw UnsupportedError("simulate_observation: SO(n) observation spaces are not supported");
  if (obs.is_sphere() && obs.n() != 3) throw UnsupportedError("simulate_observation: only S^2 among spheres");
  require_on_manifold(obs, y0, "simulate_observation");
  if (state_path.size() == 0) throw InputError("simulate_observation: empty state path");

  const Eigen::Index dim = obs.manifold_dim();
  Path out{obs, state_path.times, {}};
  out.points.reserve(state_path.size());
  Point y = y0;
  out.points.push_back(y);

  FrameAtPoint frame{y0, {}};
  if (obs.is_sphere()) {
    frame = frame0 ? FrameAtPoint{y0, frame0->vectors} : canonical_sphere_frame(y0);
    check_frame(y0, frame, static_cast<std::size_t>(dim), "simulate_observation");
  }

  Eigen::VectorXd g_prev = g(state_path.points.front());
  if (g_prev.size() != dim) {
    std::ostringstream os;
    os << "simulate_observation: g returns " << g_prev.size() << " values, " << obs.to_string() << " needs " << dim;
    throw InputError(os.str());
  }
  for (std::size_t k = 1; k < state_path.size(); ++k) {
    const double h = state_path.times[k] - state_path.times[k - 1];
    const Eigen::VectorXd g_next = g(state_path.points[k]);
    if (g_next.size() != dim) throw InputError("simulate_observation: g changed output dimension");
    const Eigen::VectorXd inc = g_next - g_prev;
    g_prev = g_next;
    const Tangent noise = (std::sqrt(h) * noise_scale) * sample_tangent_gaussian(obs, y, s);
    if (obs.is_euclidean()) {
      y = y + inc + noise;
    } else {
      const Tangent v = lift(frame, inc) + noise;
      const Point next = exp_map(obs, y, v);
      frame = transport_frame(frame, v, next);
      y = next;
    }
    out.points.push_back(y);
  }
  return out;
}

Path interpolate_path(const Path& path, int subdivisions) {
  if (subdivisions < 1) throw InputError("interpolate_path: subdivisions must be >= 1");
  if (subdivisions == 1 || path.size() < 2) return path;
  Path out{path.manifold, {}, {}};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Tangent v = log_map(path.manifold, path.points[k], path.points[k + 1]);
    const double h = path.times[k + 1] - path.times[k];
    for (int j = 0; j < subdivisions; ++j) {
      const double a = static_cast<double>(j) / subdivisions;
      out.times.push_back(path.times[k] + a * h);
      out.points.push_back(j == 0 ? path.points[k] : geodesic(path.manifold, path.points[k], v, a));
    }
  }
  out.times.push_back(path.times.back());
  out.points.push_back(path.points.back());
  return out;
}

}  // namespace geostoch
