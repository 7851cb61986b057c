#include "geostoch/manifold.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "geostoch/errors.hpp"
#include "geostoch/matrix_functions.hpp"

namespace geostoch {

namespace {

void require_size(const ManifoldSpec& m, const Eigen::VectorXd& x, const char* who, const char* what) {
  if (x.size() != m.ambient_size()) {
    std::ostringstream os;
    os << who << ": " << what << " has " << x.size() << " coordinates, " << m.to_string()
       << " expects " << m.ambient_size();
    throw InputError(os.str());
  }
}

void require_tangent(const ManifoldSpec& m, const Point& p, const Tangent& v, const char* who) {
  const double err = tangency_error(m, p, v);
  if (err > kMembershipTol * std::max(1.0, v.norm())) {
    std::ostringstream os;
    os << who << ": vector is not tangent to " << m.to_string() << " (error " << err << ")";
    throw InputError(os.str());
  }
}

}  // namespace

ManifoldSpec ManifoldSpec::euclidean(int n) {
  if (n < 1) throw InputError("euclidean manifold needs n >= 1");
  return {Kind::Euclidean, n};
}

ManifoldSpec ManifoldSpec::sphere(int ambient_n) {
  if (ambient_n < 2) throw InputError("sphere needs ambient dimension >= 2");
  return {Kind::Sphere, ambient_n};
}

ManifoldSpec ManifoldSpec::special_orthogonal(int n) {
  if (n < 2) throw InputError("SO(n) needs n >= 2");
  return {Kind::SpecialOrthogonal, n};
}

ManifoldSpec ManifoldSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("manifold must be written kind:n, got '" + std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view num = text.substr(colon + 1);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  if (ec != std::errc() || ptr != num.data() + num.size()) {
    throw InputError("bad dimension in manifold '" + std::string(text) + "'");
  }
  if (kind == "euclid" || kind == "euclidean" || kind == "R") return euclidean(n);
  if (kind == "sphere" || kind == "S") return sphere(n);
  if (kind == "so" || kind == "SO") return special_orthogonal(n);
  throw InputError("unknown manifold kind '" + std::string(kind) + "'");
}

int ManifoldSpec::ambient_size() const noexcept { return kind_ == Kind::SpecialOrthogonal ? n_ * n_ : n_; }

int ManifoldSpec::manifold_dim() const noexcept {
  switch (kind_) {
    case Kind::Euclidean:
      return n_;
    case Kind::Sphere:
      return n_ - 1;
    case Kind::SpecialOrthogonal:
      return n_ * (n_ - 1) / 2;
  }
  return 0;
}

std::string ManifoldSpec::to_string() const {
  switch (kind_) {
    case Kind::Euclidean:
      return "euclid:" + std::to_string(n_);
    case Kind::Sphere:
      return "sphere:" + std::to_string(n_);
    case Kind::SpecialOrthogonal:
      return "so:" + std::to_string(n_);
  }
  return {};
}

Point ManifoldSpec::origin() const {
  switch (kind_) {
    case Kind::Euclidean:
      return Point::Zero(n_);
    case Kind::Sphere:
      return Point::Unit(n_, n_ - 1);
    case Kind::SpecialOrthogonal:
      return flatten(Eigen::MatrixXd::Identity(n_, n_));
  }
  return {};
}

Eigen::MatrixXd as_matrix(const ManifoldSpec& m, const Eigen::VectorXd& flat) {
  const int n = m.n();
  if (flat.size() != static_cast<Eigen::Index>(n) * n) {
    throw InputError("as_matrix: expected " + std::to_string(n * n) + " coordinates");
  }
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), n, n);
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& mat) {
  return Eigen::Map<const Eigen::VectorXd>(mat.data(), mat.size());
}

double membership_error(const ManifoldSpec& m, const Point& p) {
  if (p.size() != m.ambient_size()) return std::numeric_limits<double>::infinity();
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return p.allFinite() ? 0.0 : std::numeric_limits<double>::infinity();
    case ManifoldSpec::Kind::Sphere:
      return std::abs(p.norm() - 1.0);
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd x = as_matrix(m, p);
      if (x.determinant() <= 0.0) return std::numeric_limits<double>::infinity();
      return (x.transpose() * x - Eigen::MatrixXd::Identity(m.n(), m.n())).norm();
    }
  }
  return std::numeric_limits<double>::infinity();
}

bool on_manifold(const ManifoldSpec& m, const Point& p, double tol) { return membership_error(m, p) <= tol; }

double tangency_error(const ManifoldSpec& m, const Point& p, const Tangent& v) {
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return 0.0;
    case ManifoldSpec::Kind::Sphere:
      return std::abs(v.dot(p));
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd a = as_matrix(m, p).transpose() * as_matrix(m, v);
      return (a + a.transpose()).norm() * 0.5;
    }
  }
  return 0.0;
}

void require_on_manifold(const ManifoldSpec& m, const Point& p, const char* who) {
  require_size(m, p, who, "point");
  const double err = membership_error(m, p);
  if (!(err <= kMembershipTol)) {
    std::ostringstream os;
    os << who << ": point is not on " << m.to_string() << " (error " << err << ")";
    throw InputError(os.str());
  }
}

Point retract_to_manifold(const ManifoldSpec& m, const Point& p) {
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return p;
    case ManifoldSpec::Kind::Sphere:
      return p / p.norm();
    case ManifoldSpec::Kind::SpecialOrthogonal:
      return flatten(project_to_so(as_matrix(m, p)));
  }
  return p;
}

Tangent project_tangent(const ManifoldSpec& m, const Point& p, const Tangent& v) {
  require_size(m, p, "project_tangent", "point");
  require_size(m, v, "project_tangent", "vector");
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return v;
    case ManifoldSpec::Kind::Sphere:
      return v - v.dot(p) * p;
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd x = as_matrix(m, p);
      return flatten(x * skew_part(x.transpose() * as_matrix(m, v)));
    }
  }
  return v;
}

Point exp_map(const ManifoldSpec& m, const Point& p, const Tangent& v) {
  require_size(m, p, "exp_map", "point");
  require_size(m, v, "exp_map", "vector");
  require_tangent(m, p, v, "exp_map");
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return p + v;
    case ManifoldSpec::Kind::Sphere: {
      const double len = v.norm();
      if (len == 0.0) return p;
      const Point q = std::cos(len) * p + (std::sin(len) / len) * v;
      return q / q.norm();
    }
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd x = as_matrix(m, p);
      const Eigen::MatrixXd a = skew_part(x.transpose() * as_matrix(m, v));
      return flatten(x * matrix_exp(a));
    }
  }
  return p;
}

Tangent log_map(const ManifoldSpec& m, const Point& p, const Point& q) {
  require_size(m, p, "log_map", "point");
  require_size(m, q, "log_map", "point");
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return q - p;
    case ManifoldSpec::Kind::Sphere: {
      const Tangent w = q - q.dot(p) * p;
      const double s = w.norm();
      const double c = q.dot(p);
      const double theta = std::atan2(s, c);
      if (std::numbers::pi - theta <= kMembershipTol) {
        throw DomainError("log_map: points are antipodal on the sphere");
      }
      if (s == 0.0) return Tangent::Zero(p.size());
      return (theta / s) * w;
    }
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd x = as_matrix(m, p);
      return flatten(x * matrix_log_so(x.transpose() * as_matrix(m, q)));
    }
  }
  return q - p;
}

Point geodesic(const ManifoldSpec& m, const Point& p, const Tangent& v, double t) {
  return exp_map(m, p, t * v);
}

double riemannian_inner(const ManifoldSpec& m, const Tangent& a, const Tangent& b) {
  return m.is_so() ? 0.5 * a.dot(b) : a.dot(b);
}

double riemannian_norm(const ManifoldSpec& m, const Tangent& a) { return std::sqrt(riemannian_inner(m, a, a)); }

double distance(const ManifoldSpec& m, const Point& p, const Point& q) {
  return riemannian_norm(m, log_map(m, p, q));
}

Tangent parallel_transport_sphere(const Point& p, const Tangent& v, const Tangent& w) {
  if (p.size() != v.size() || p.size() != w.size()) {
    throw InputError("parallel_transport_sphere: dimension mismatch");
  }
  const auto sphere = ManifoldSpec::sphere(static_cast<int>(p.size()));
  require_on_manifold(sphere, p, "parallel_transport_sphere");
  require_tangent(sphere, p, v, "parallel_transport_sphere");
  require_tangent(sphere, p, w, "parallel_transport_sphere");
  const double len = v.norm();
  if (len == 0.0) return w;
  const Tangent u = v / len;
  const double along = w.dot(u);
  // The component along the geodesic direction turns with the great circle;
  // the orthogonal remainder is carried unchanged.
  return w + along * ((std::cos(len) - 1.0) * u - std::sin(len) * p);
}

Tangent parallel_transport(const ManifoldSpec& m, const Point& p, const Tangent& v, const Tangent& w) {
  if (!m.is_sphere()) throw UnsupportedError("parallel transport is only implemented on spheres, not " + m.to_string());
  require_size(m, p, "parallel_transport", "point");
  return parallel_transport_sphere(p, v, w);
}

double FrameAtPoint::orthonormality_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(vectors[i].dot(vectors[j]) - target));
    }
  }
  return worst;
}

FrameAtPoint canonical_sphere_frame(const Point& p) {
  const auto n = p.size();
  FrameAtPoint frame{p, {}};
  for (Eigen::Index axis = 0; axis < n && static_cast<Eigen::Index>(frame.vectors.size()) < n - 1; ++axis) {
    Tangent e = Tangent::Unit(n, axis);
    e -= e.dot(p) * p;
    for (const auto& f : frame.vectors) e -= e.dot(f) * f;
    const double len = e.norm();
    if (len > 1e-6) frame.vectors.push_back(e / len);
  }
  return frame;
}

}  // namespace geostoch
