#include "geostoch/matrix_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "geostoch/errors.hpp"

namespace geostoch {

namespace {

constexpr double kCutLocusTol = 1e-9;
constexpr double kRankTol = 1e-12;

bool is_skew(const Eigen::MatrixXd& a) {
  return (a + a.transpose()).norm() <= 1e-13 * std::max(1.0, a.norm());
}

void require_square(const Eigen::MatrixXd& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw InputError(os.str());
  }
}

Eigen::Vector3d vee3(const Eigen::Matrix3d& k) {
  return {k(2, 1), k(0, 2), k(1, 0)};
}

Eigen::Matrix3d hat3(const Eigen::Vector3d& w) {
  Eigen::Matrix3d k;
  k << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return k;
}

// exp of a general 2x2 matrix: a = s I + B with B traceless, B^2 = q I.
Eigen::Matrix2d exp2x2(const Eigen::Matrix2d& a) {
  const double s = 0.5 * a.trace();
  const Eigen::Matrix2d b = a - s * Eigen::Matrix2d::Identity();
  const double q = -b.determinant();
  double c = 0.0;
  double sinc = 0.0;  // sinh(sqrt q)/sqrt q, analytically continued
  if (std::abs(q) < 1e-8) {
    c = 1.0 + q / 2.0 + q * q / 24.0;
    sinc = 1.0 + q / 6.0 + q * q / 120.0;
  } else if (q > 0.0) {
    const double w = std::sqrt(q);
    c = std::cosh(w);
    sinc = std::sinh(w) / w;
  } else {
    const double w = std::sqrt(-q);
    c = std::cos(w);
    sinc = std::sin(w) / w;
  }
  return std::exp(s) * (c * Eigen::Matrix2d::Identity() + sinc * b);
}

void check_rotation(const Eigen::MatrixXd& r, const char* who) {
  require_square(r, who);
  const auto n = r.rows();
  const double orth = (r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).norm();
  if (orth > 1e-8 || r.determinant() <= 0.0) {
    std::ostringstream os;
    os << who << ": input is not in SO(" << n << ") (|R^T R - I|_F = " << orth
       << ", det = " << r.determinant() << ")";
    throw DomainError(os.str());
  }
}

[[noreturn]] void throw_cut_locus(const char* who, double angle) {
  std::ostringstream os;
  os << who << ": rotation angle " << angle << " is at the cut locus (eigenvalue -1)";
  throw DomainError(os.str());
}

Eigen::Matrix3d log_so3(const Eigen::Matrix3d& r) {
  const Eigen::Vector3d v = vee3(0.5 * (r - r.transpose()));  // sin(theta) * axis
  const double s = v.norm();
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double theta = std::atan2(s, c);
  if (std::numbers::pi - theta <= kCutLocusTol) throw_cut_locus("matrix_log_so", theta);

  if (theta < 1e-4) {
    // theta / sin(theta) ~ 1 + theta^2 / 6
    return hat3(v * (1.0 + theta * theta / 6.0));
  }
  if (c < 0.0 && s < 1e-3) {
    // Near pi the skew part carries almost no information; read the axis
    // off the symmetric part (R + R^T)/2 = cos I + (1 - cos) u u^T.
    const Eigen::Matrix3d uu =
        (0.5 * (r + r.transpose()) - c * Eigen::Matrix3d::Identity()) / (1.0 - c);
    Eigen::Index k = 0;
    uu.diagonal().maxCoeff(&k);
    Eigen::Vector3d u = uu.col(k) / std::sqrt(std::max(uu(k, k), 1e-300));
    u.normalize();
    if (u.dot(v) < 0.0) u = -u;
    return hat3(theta * u);
  }
  return hat3(v * (theta / s));
}

}  // namespace

Eigen::Matrix2d rotation2(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix3d rodrigues(const Eigen::Matrix3d& skew) {
  const Eigen::Vector3d w = vee3(skew);
  const double t2 = w.squaredNorm();
  double a = 0.0;  // sin(t)/t
  double b = 0.0;  // (1 - cos t)/t^2
  if (t2 < 1e-8) {
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    const double t = std::sqrt(t2);
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / t2;
  }
  const Eigen::Matrix3d k = hat3(w);
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
  require_square(a, "matrix_exp");
  switch (a.rows()) {
    case 1:
      return Eigen::MatrixXd::Constant(1, 1, std::exp(a(0, 0)));
    case 2:
      return exp2x2(a);
    case 3:
      if (is_skew(a)) return rodrigues(skew_part(a));
      break;
    default:
      break;
  }
  return a.exp();
}

Eigen::MatrixXd matrix_log_so(const Eigen::MatrixXd& r) {
  check_rotation(r, "matrix_log_so");
  const auto n = r.rows();
  if (n == 1) return Eigen::MatrixXd::Zero(1, 1);
  if (n == 2) {
    const double theta = std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
    if (std::numbers::pi - std::abs(theta) <= kCutLocusTol) throw_cut_locus("matrix_log_so", theta);
    Eigen::MatrixXd out(2, 2);
    out << 0.0, -theta, theta, 0.0;
    return out;
  }
  if (n == 3) return log_so3(r);

  Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam + 1.0) <= kCutLocusTol) throw_cut_locus("matrix_log_so", std::arg(lam));
  }
  return skew_part(r.log());
}

Eigen::MatrixXd matrix_log_spd(const Eigen::MatrixXd& p) {
  require_square(p, "matrix_log_spd");
  const double asym = (p - p.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, p.norm())) {
    std::ostringstream os;
    os << "matrix_log_spd: input is not symmetric (|P - P^T|_F = " << asym << ")";
    throw DomainError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym_part(p));
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "matrix_log_spd: input is not positive definite, eigenvalues [" << lam.transpose() << "]";
    throw DomainError(os.str());
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  return sym_part(v * lam.array().log().matrix().asDiagonal() * v.transpose());
}

PolarDecomposition polar_decompose(const Eigen::MatrixXd& y) {
  require_square(y, "polar_decompose");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto n = y.rows();
  if (!(sv(0) > 0.0) || sv(n - 1) <= kRankTol * sv(0)) {
    std::ostringstream os;
    os << "polar_decompose: matrix is rank deficient, singular values [" << sv.transpose() << "]";
    throw DegenerateError(os.str());
  }
  Eigen::MatrixXd left = svd.matrixU();
  const Eigen::MatrixXd& right = svd.matrixV();
  if ((left * right.transpose()).determinant() < 0.0) left.col(n - 1) *= -1.0;
  PolarDecomposition out;
  out.u = left * right.transpose();
  out.p = sym_part(out.u.transpose() * y);
  return out;
}

Eigen::MatrixXd qr_q(const Eigen::MatrixXd& y) {
  require_square(y, "qr_q");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  const auto n = y.rows();
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::VectorXd rdiag = qr.matrixQR().diagonal();
  const double scale = rdiag.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || rdiag.cwiseAbs().minCoeff() <= kRankTol * scale) {
    throw DegenerateError("qr_q: matrix is rank deficient");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rdiag(i) < 0.0) q.col(i) *= -1.0;
  }
  if (q.determinant() < 0.0) q.col(n - 1) *= -1.0;
  return q;
}

Eigen::MatrixXd project_to_so(const Eigen::MatrixXd& y) { return polar_decompose(y).u; }

Eigen::MatrixXd skew_part(const Eigen::MatrixXd& a) { return 0.5 * (a - a.transpose()); }

Eigen::MatrixXd sym_part(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

double half_trace_inner(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return 0.5 * (y.transpose() * x).trace();
}

double so_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd l = matrix_log_so(a.transpose() * b);
  return std::sqrt(half_trace_inner(l, l));
}

}  // namespace geostoch
