#include "geostoch/liegroup.hpp"

#include <cmath>
#include <sstream>

#include "geostoch/errors.hpp"
#include "geostoch/matrix_functions.hpp"
#include "geostoch/parallel.hpp"

namespace geostoch {

Eigen::MatrixXd LieAlgebraBasis::combine(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != dim()) throw InputError("coefficient vector does not match the so(n) basis");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < dim(); ++i) out += coeffs(i) * matrices[static_cast<std::size_t>(i)];
  return out;
}

Eigen::VectorXd LieAlgebraBasis::coordinates(const Eigen::MatrixXd& skew) const {
  if (skew.rows() != n || skew.cols() != n) throw InputError("matrix does not match the so(n) basis");
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = half_trace_inner(skew, matrices[static_cast<std::size_t>(i)]);
  return out;
}

Eigen::MatrixXd LieAlgebraBasis::gram() const {
  Eigen::MatrixXd out(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      out(i, j) = half_trace_inner(matrices[static_cast<std::size_t>(i)], matrices[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

LieAlgebraBasis so_basis(int n) {
  if (n < 2) throw InputError("so(n) basis needs n >= 2, got " + std::to_string(n));
  LieAlgebraBasis b;
  b.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
      a(j, i) = 1.0;
      a(i, j) = -1.0;
      b.matrices.push_back(std::move(a));
    }
  }
  return b;
}

BrownianDistParams::BrownianDistParams(Eigen::MatrixXd g_, const Eigen::MatrixXd& C, LieAlgebraBasis basis_)
    : g(std::move(g_)), colour(C), basis(std::move(basis_)) {
  if (g.rows() != basis.n || g.cols() != basis.n) throw InputError("g does not match the group order of the basis");
  require_on_manifold(ManifoldSpec::special_orthogonal(basis.n), flatten(g), "Brownian distribution location g");
  if (C.rows() != basis.dim()) {
    std::ostringstream os;
    os << "C must be " << basis.dim() << "x" << basis.dim() << " for SO(" << basis.n << "), got " << C.rows() << "x"
       << C.cols();
    throw InputError(os.str());
  }
}

BrownianDistParams::BrownianDistParams(Eigen::MatrixXd g_, const Eigen::MatrixXd& C)
    : BrownianDistParams(g_, C, so_basis(static_cast<int>(g_.rows()))) {}

std::size_t unit_time_steps(double delta) {
  if (!(delta > 0.0) || delta > 1.0) throw InputError("delta must lie in (0, 1]");
  const double k = std::round(1.0 / delta);
  if (std::abs(k * delta - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "delta = " << delta << " does not divide 1";
    throw InputError(os.str());
  }
  return static_cast<std::size_t>(k);
}

namespace {

// One group size, fixed or dynamic. Draw order per step: d standard normals,
// then beta = L z, exactly as sample_coloured.
template <int N>
class LeftStepper {
 public:
  using Mat = Eigen::Matrix<double, N, N>;
  static constexpr int D = N == Eigen::Dynamic ? Eigen::Dynamic : N * (N - 1) / 2;
  using Vec = Eigen::Matrix<double, D, 1>;

  explicit LeftStepper(const BrownianDistParams& p) : l_(p.colour.factor()), zero_(p.colour.is_zero()) {
    for (const auto& a : p.basis.matrices) basis_.push_back(a);
    z_.resize(p.basis.dim());
    beta_.resize(p.basis.dim());
  }

  /// exp(sqrt(h) sum_i beta_i A_i) with beta drawn from s.
  Mat increment(double h, GaussianStream& s) {
    for (Eigen::Index i = 0; i < z_.size(); ++i) z_(i) = s.next();
    if (zero_) return Mat::Identity(basis_.front().rows(), basis_.front().cols());
    beta_.noalias() = l_ * z_;
    beta_ *= std::sqrt(h);
    const Vec& beta = beta_;
    if constexpr (N == 2) {
      return rotation2(beta(0));
    } else {
      Mat x = Mat::Zero(basis_.front().rows(), basis_.front().cols());
      for (std::size_t i = 0; i < basis_.size(); ++i) x += beta(static_cast<Eigen::Index>(i)) * basis_[i];
      if constexpr (N == 3) {
        return rodrigues(x);
      } else {
        return matrix_exp(x);
      }
    }
  }

  static Mat reproject(const Mat& w) {
    if constexpr (N == 2) {
      // Polar factor of a 2x2 matrix with positive determinant.
      return rotation2(std::atan2(w(1, 0) - w(0, 1), w(0, 0) + w(1, 1)));
    } else {
      return project_to_so(w);
    }
  }

 private:
  Eigen::Matrix<double, D, D> l_;
  bool zero_;
  std::vector<Mat> basis_;
  Vec z_;
  Vec beta_;
};

bool is_canonical_2(const LieAlgebraBasis& b) {
  return b.n == 2 && b.matrices.size() == 1 && b.matrices[0].isApprox(so_basis(2).matrices[0], 0.0);
}

template <int N>
Path left_bm_impl(const BrownianDistParams& p, const std::vector<double>& times, GaussianStream& s) {
  using Mat = typename LeftStepper<N>::Mat;
  LeftStepper<N> stepper(p);
  const auto m = ManifoldSpec::special_orthogonal(p.n());
  Path path{m, times, {}};
  path.points.reserve(times.size());
  Mat w = p.g;
  path.points.push_back(flatten(Eigen::MatrixXd(w)));
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    w = w * stepper.increment(times[k + 1] - times[k], s);
    if ((k + 1) % kReorthogonalizeEvery == 0) w = LeftStepper<N>::reproject(w);
    path.points.push_back(flatten(Eigen::MatrixXd(w)));
  }
  return path;
}

template <int N>
Eigen::MatrixXd endpoint_impl(const BrownianDistParams& p, std::size_t steps, double delta, GaussianStream& s) {
  using Mat = typename LeftStepper<N>::Mat;
  LeftStepper<N> stepper(p);
  Mat w = p.g;
  for (std::size_t k = 0; k < steps; ++k) {
    w = w * stepper.increment(delta, s);
    if ((k + 1) % kReorthogonalizeEvery == 0) w = LeftStepper<N>::reproject(w);
  }
  return w;
}

}  // namespace

Path simulate_left_bm(const BrownianDistParams& params, const SimConfig& cfg, GaussianStream& s) {
  cfg.validate();
  const auto times = cfg.grid();
  // The 2x2 kernel hard-codes the canonical generator; other bases use the generic path.
  if (is_canonical_2(params.basis)) return left_bm_impl<2>(params, times, s);
  if (params.n() == 3) return left_bm_impl<3>(params, times, s);
  return left_bm_impl<Eigen::Dynamic>(params, times, s);
}

Eigen::MatrixXd sample_brownian_dist(const BrownianDistParams& params, double delta, GaussianStream& s) {
  const std::size_t steps = unit_time_steps(delta);
  const double h = 1.0 / static_cast<double>(steps);
  if (is_canonical_2(params.basis)) return endpoint_impl<2>(params, steps, h, s);
  if (params.n() == 3) return endpoint_impl<3>(params, steps, h, s);
  return endpoint_impl<Eigen::Dynamic>(params, steps, h, s);
}

std::vector<Eigen::MatrixXd> sample_brownian_set(const BrownianDistParams& params, double delta, std::size_t m,
                                                 std::uint64_t seed) {
  if (m == 0) throw InputError("sample count must be positive");
  unit_time_steps(delta);
  std::vector<Eigen::MatrixXd> out(m);
  for_each_index(m, [&](std::size_t i) {
    GaussianStream s(seed, i);
    out[i] = sample_brownian_dist(params, delta, s);
  });
  return out;
}

}  // namespace geostoch
