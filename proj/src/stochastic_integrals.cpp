#include "geostoch/stochastic_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "geostoch/errors.hpp"

namespace geostoch {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_same_length(std::span<const double> x, std::span<const double> y, const char* who) {
  if (x.size() != y.size()) {
    std::ostringstream os;
    os << who << ": integrand has " << x.size() << " samples, integrator has " << y.size();
    throw InputError(os.str());
  }
}

template <class Term>
double partition_sum(std::span<const double> x, std::span<const double> y, const char* who, Term term) {
  require_same_length(x, y, who);
  CompensatedSum acc;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) acc.add(term(x[k], x[k + 1]) * (y[k + 1] - y[k]));
  return acc.value();
}

void require_finite(const Eigen::VectorXd& x, std::size_t step) {
  if (!x.allFinite()) throw DivergedError(step, "simulation diverged: state is not finite");
}

void check_increments(const std::vector<double>& times, const Eigen::MatrixXd& increments, int driver_dim,
                      const char* who) {
  if (times.empty()) throw InputError(std::string(who) + ": empty time grid");
  if (increments.rows() != driver_dim || increments.cols() + 1 != static_cast<Eigen::Index>(times.size())) {
    std::ostringstream os;
    os << who << ": increments are " << increments.rows() << "x" << increments.cols() << ", expected " << driver_dim
       << "x" << times.size() - 1;
    throw InputError(os.str());
  }
}

}  // namespace

Partition Partition::uniform_grid(double horizon, std::size_t intervals) {
  if (!(horizon > 0.0) || intervals == 0) throw InputError("uniform partition needs T > 0 and N >= 1");
  Partition p;
  p.points.resize(intervals + 1);
  for (std::size_t k = 0; k < intervals; ++k) p.points[k] = horizon * static_cast<double>(k) / static_cast<double>(intervals);
  p.points[intervals] = horizon;
  p.uniform = true;
  p.mesh = horizon / static_cast<double>(intervals);
  return p;
}

Partition Partition::from_points(std::vector<double> points) {
  if (points.size() < 2 || points.front() != 0.0) throw InputError("partition must start at 0 and have >= 2 points");
  Partition p;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double h = points[k] - points[k - 1];
    if (!(h > 0.0)) throw InputError("partition points must be strictly increasing");
    p.mesh = std::max(p.mesh, h);
    lo = std::min(lo, h);
  }
  p.uniform = (p.mesh - lo) <= 1e-12 * p.mesh;
  p.points = std::move(points);
  return p;
}

double ito_sum(std::span<const double> x, std::span<const double> y) {
  return partition_sum(x, y, "ito_sum", [](double left, double) { return left; });
}

double right_endpoint_sum(std::span<const double> x, std::span<const double> y) {
  return partition_sum(x, y, "right_endpoint_sum", [](double, double right) { return right; });
}

double stratonovich_sum(std::span<const double> x, std::span<const double> y) {
  return partition_sum(x, y, "stratonovich_sum", [](double left, double right) { return 0.5 * (left + right); });
}

double cross_variation(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "cross_variation");
  CompensatedSum acc;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) acc.add((x[k + 1] - x[k]) * (y[k + 1] - y[k]));
  return acc.value();
}

double quadratic_variation(std::span<const double> y) { return cross_variation(y, y); }

double quadratic_variation(std::span<const double> y, const Partition& partition) {
  if (y.size() != partition.points.size()) throw InputError("quadratic_variation: samples do not match the partition");
  return quadratic_variation(y);
}

std::vector<double> sample_bm_on(const Partition& partition, GaussianStream& s) {
  std::vector<double> b(partition.points.size(), 0.0);
  for (std::size_t k = 1; k < b.size(); ++k) {
    b[k] = b[k - 1] + std::sqrt(partition.points[k] - partition.points[k - 1]) * s.next();
  }
  return b;
}

void DiffusionSpec::validate(double t, const Eigen::VectorXd& x) const {
  if (!drift || !diffusion) throw InputError("diffusion spec needs both drift and diffusion");
  if (state_dim < 1 || driver_dim < 1) throw InputError("diffusion spec dimensions must be positive");
  if (x.size() != state_dim) throw InputError("initial state has the wrong dimension");
  const Eigen::VectorXd b = drift(t, x);
  const Eigen::MatrixXd sig = diffusion(t, x);
  if (b.size() != state_dim) throw InputError("drift returns the wrong dimension");
  if (sig.rows() != state_dim || sig.cols() != driver_dim) throw InputError("diffusion returns the wrong shape");
}

Eigen::MatrixXd brownian_increments(const std::vector<double>& times, int driver_dim, GaussianStream& s) {
  if (times.empty()) throw InputError("brownian_increments: empty grid");
  Eigen::MatrixXd inc(driver_dim, static_cast<Eigen::Index>(times.size()) - 1);
  for (Eigen::Index k = 0; k < inc.cols(); ++k) {
    const double h = times[static_cast<std::size_t>(k) + 1] - times[static_cast<std::size_t>(k)];
    inc.col(k) = std::sqrt(h) * s.next_vector(driver_dim);
  }
  return inc;
}

Eigen::MatrixXd coarsen_increments(const Eigen::MatrixXd& increments, std::size_t factor) {
  const auto f = static_cast<Eigen::Index>(factor);
  if (f < 1 || increments.cols() % f != 0) throw InputError("coarsen_increments: factor must divide the step count");
  Eigen::MatrixXd out(increments.rows(), increments.cols() / f);
  for (Eigen::Index k = 0; k < out.cols(); ++k) out.col(k) = increments.middleCols(k * f, f).rowwise().sum();
  return out;
}

Path euler_maruyama_driven(const DiffusionSpec& spec, const Eigen::VectorXd& x0, const std::vector<double>& times,
                           const Eigen::MatrixXd& increments) {
  check_increments(times, increments, spec.driver_dim, "euler_maruyama");
  spec.validate(times.front(), x0);
  Path path{ManifoldSpec::euclidean(spec.state_dim), times, {}};
  path.points.reserve(times.size());
  Eigen::VectorXd x = x0;
  path.points.push_back(x);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double t = times[k];
    const double h = times[k + 1] - t;
    x = x + spec.drift(t, x) * h + spec.diffusion(t, x) * increments.col(static_cast<Eigen::Index>(k));
    require_finite(x, k);
    path.points.push_back(x);
  }
  return path;
}

Path euler_maruyama(const DiffusionSpec& spec, const Eigen::VectorXd& x0, const SimConfig& cfg, GaussianStream& s) {
  const auto times = cfg.grid();
  return euler_maruyama_driven(spec, x0, times, brownian_increments(times, spec.driver_dim, s));
}

DiffusionSpec strat_to_ito(const ScalarStratonovich& sde) {
  if (!sde.sigma || !sde.dsigma_dx) throw InputError("strat_to_ito needs sigma and its derivative");
  DiffusionSpec spec;
  spec.state_dim = 1;
  spec.driver_dim = 1;
  spec.drift = [sde](double t, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, 0.5 * sde.sigma(t, x(0)) * sde.dsigma_dx(t, x(0)));
  };
  spec.diffusion = [sde](double t, const Eigen::VectorXd& x) {
    return Eigen::MatrixXd::Constant(1, 1, sde.sigma(t, x(0)));
  };
  return spec;
}

Path heun_stratonovich_driven(const ScalarStratonovich& sde, double x0, const std::vector<double>& times,
                              const Eigen::MatrixXd& increments) {
  if (!sde.sigma) throw InputError("heun_stratonovich needs sigma");
  check_increments(times, increments, 1, "heun_stratonovich");
  Path path{ManifoldSpec::euclidean(1), times, {}};
  path.points.reserve(times.size());
  double x = x0;
  path.points.push_back(Eigen::VectorXd::Constant(1, x));
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double t = times[k];
    const double h = times[k + 1] - t;
    const double db = increments(0, static_cast<Eigen::Index>(k));
    const double s0 = sde.sigma(t, x);
    const double predictor = x + s0 * db;
    x = x + 0.5 * (s0 + sde.sigma(t + h, predictor)) * db;
    if (!std::isfinite(x)) throw DivergedError(k, "simulation diverged: state is not finite");
    path.points.push_back(Eigen::VectorXd::Constant(1, x));
  }
  return path;
}

Path heun_stratonovich(const ScalarStratonovich& sde, double x0, const SimConfig& cfg, GaussianStream& s) {
  const auto times = cfg.grid();
  return heun_stratonovich_driven(sde, x0, times, brownian_increments(times, 1, s));
}

std::vector<double> scalar_samples(const Path& path) {
  if (path.manifold.ambient_size() != 1) throw InputError("scalar_samples: path is not one-dimensional");
  std::vector<double> out;
  out.reserve(path.size());
  for (const auto& p : path.points) out.push_back(p(0));
  return out;
}

}  // namespace geostoch
