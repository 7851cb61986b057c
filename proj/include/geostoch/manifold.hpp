#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace geostoch {

/// Membership / tangency tolerance shared by every manifold check.
inline constexpr double kMembershipTol = 1e-9;

/// Points and tangent vectors are stored in ambient coordinates. SO(n)
/// elements are n x n matrices flattened column-major into n^2 entries.
using Point = Eigen::VectorXd;
using Tangent = Eigen::VectorXd;

/// Embedded manifold descriptor: R^n, the unit sphere S^{n-1} in R^n, or SO(n).
class ManifoldSpec {
 public:
  enum class Kind { Euclidean, Sphere, SpecialOrthogonal };

  static ManifoldSpec euclidean(int n);
  static ManifoldSpec sphere(int ambient_n);
  static ManifoldSpec special_orthogonal(int n);

  /// Parses `euclid:n`, `sphere:n` or `so:n`.
  static ManifoldSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  /// Number of ambient coordinates (n, n, n^2).
  int ambient_size() const noexcept;
  /// Intrinsic dimension (n, n-1, n(n-1)/2).
  int manifold_dim() const noexcept;
  std::string to_string() const;

  bool is_euclidean() const noexcept { return kind_ == Kind::Euclidean; }
  bool is_sphere() const noexcept { return kind_ == Kind::Sphere; }
  bool is_so() const noexcept { return kind_ == Kind::SpecialOrthogonal; }

  /// Canonical base point: origin, last basis vector (north pole), identity.
  Point origin() const;

  friend bool operator==(const ManifoldSpec&, const ManifoldSpec&) = default;

 private:
  ManifoldSpec(Kind kind, int n) : kind_(kind), n_(n) {}
  Kind kind_;
  int n_;
};

// Matrix views of flattened SO(n) coordinates.
Eigen::MatrixXd as_matrix(const ManifoldSpec& m, const Eigen::VectorXd& flat);
Eigen::VectorXd flatten(const Eigen::MatrixXd& mat);

/// Distance of p from the manifold in the membership sense (0 on M).
double membership_error(const ManifoldSpec& m, const Point& p);
bool on_manifold(const ManifoldSpec& m, const Point& p, double tol = kMembershipTol);
/// Distance of v from T_p M in the tangency sense.
double tangency_error(const ManifoldSpec& m, const Point& p, const Tangent& v);

/// Throws InputError if p is not on M within tolerance.
void require_on_manifold(const ManifoldSpec& m, const Point& p, const char* who);

/// Renormalise (sphere) or polar-project (SO(n)) back onto M.
Point retract_to_manifold(const ManifoldSpec& m, const Point& p);

/// Orthogonal projection of an ambient vector onto T_p M.
Tangent project_tangent(const ManifoldSpec& m, const Point& p, const Tangent& v);

/// Riemannian exponential. Sphere results are renormalised.
Point exp_map(const ManifoldSpec& m, const Point& p, const Tangent& v);

/// Inverse of exp_map away from the cut locus; throws DomainError at the cut locus.
Tangent log_map(const ManifoldSpec& m, const Point& p, const Point& q);

Point geodesic(const ManifoldSpec& m, const Point& p, const Tangent& v, double t);

/// Riemannian inner product of tangent vectors at a common base point. On
/// SO(n) it is the 1/2 Tr metric, so the so(n) basis is orthonormal.
double riemannian_inner(const ManifoldSpec& m, const Tangent& a, const Tangent& b);
double riemannian_norm(const ManifoldSpec& m, const Tangent& a);

/// Geodesic distance.
double distance(const ManifoldSpec& m, const Point& p, const Point& q);

/// Parallel transport of w along t -> exp_map(p, t v) on a sphere, to t = 1.
Tangent parallel_transport_sphere(const Point& p, const Tangent& v, const Tangent& w);
/// Same, dispatched on the manifold; anything but a sphere is UnsupportedError.
Tangent parallel_transport(const ManifoldSpec& m, const Point& p, const Tangent& v, const Tangent& w);

/// Orthonormal tangent frame at a point.
struct FrameAtPoint {
  Point base;
  std::vector<Tangent> vectors;

  /// Largest deviation of the Gram matrix from the identity.
  double orthonormality_error() const;
};

/// Frame at p obtained by projecting the ambient coordinate axes and running
/// Gram-Schmidt. Sphere only.
FrameAtPoint canonical_sphere_frame(const Point& p);

}  // namespace geostoch
