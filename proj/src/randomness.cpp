#include "geostoch/randomness.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "geostoch/errors.hpp"
#include "geostoch/matrix_functions.hpp"

namespace geostoch {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t id) {
  const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
  const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  return std::seed_seq{lo(seed), hi(seed), lo(id), hi(id), 0x9e3779b9u};
}

}  // namespace

GaussianStream::GaussianStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  auto seq = make_seed_seq(master_seed, stream_id);
  engine_.seed(seq);
}

double GaussianStream::next() {
  ++draws_;
  return normal_(engine_);
}

Eigen::VectorXd GaussianStream::next_vector(Eigen::Index n) {
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = next();
  return out;
}

ColourSpec::ColourSpec(const Eigen::MatrixXd& covariance) : c_(covariance) {
  if (c_.rows() != c_.cols() || c_.rows() == 0) throw InputError("covariance must be a non-empty square matrix");
  const double scale = std::max(1.0, c_.norm());
  if ((c_ - c_.transpose()).norm() > 1e-12 * scale) throw InputError("covariance must be symmetric");
  c_ = sym_part(c_);
  zero_ = c_.isZero(0.0);

  Eigen::LLT<Eigen::MatrixXd> llt(c_);
  if (llt.info() == Eigen::Success) {
    l_ = llt.matrixL();
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c_);
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-12 * scale) {
    std::ostringstream os;
    os << "covariance is not positive semidefinite, eigenvalues [" << lam.transpose() << "]";
    throw InputError(os.str());
  }
  lam = lam.cwiseMax(0.0).cwiseSqrt();
  l_ = es.eigenvectors() * lam.asDiagonal();
  // Exact zeros stay exact: kill rows the covariance says are degenerate.
  for (Eigen::Index i = 0; i < c_.rows(); ++i) {
    if (c_(i, i) == 0.0) l_.row(i).setZero();
  }
}

Tangent sample_tangent_gaussian(const ManifoldSpec& m, const Point& p, GaussianStream& s) {
  const Eigen::VectorXd z = s.next_vector(m.ambient_size());
  switch (m.kind()) {
    case ManifoldSpec::Kind::Euclidean:
      return z;
    case ManifoldSpec::Kind::Sphere:
      return z - z.dot(p) * p;
    case ManifoldSpec::Kind::SpecialOrthogonal: {
      const Eigen::MatrixXd x = as_matrix(m, p);
      return flatten(std::numbers::sqrt2 * (x * skew_part(x.transpose() * as_matrix(m, z))));
    }
  }
  return z;
}

Eigen::VectorXd sample_coloured(const ColourSpec& spec, GaussianStream& s) {
  const Eigen::VectorXd z = s.next_vector(spec.dim());
  return spec.factor() * z;
}

}  // namespace geostoch
