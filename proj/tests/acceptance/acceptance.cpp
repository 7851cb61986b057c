// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "geostoch/estimation.hpp"
#include "geostoch/liegroup.hpp"
#include "geostoch/matrix_functions.hpp"
#include "geostoch/process_sim.hpp"
#include "geostoch/series.hpp"
#include "geostoch/stochastic_integrals.hpp"

using namespace geostoch;

namespace {

std::mt19937_64 test_rng(7'040'211);

double test_normal() {
  static std::normal_distribution<double> d;
  return d(test_rng);
}

Eigen::MatrixXd test_symmetric(int n) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = test_normal();
  return sym_part(a);
}

Eigen::MatrixXd test_rotation(int n) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = test_normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double se_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double v = 0.0;
  for (double a : x) v += (a - m) * (a - m);
  v /= static_cast<double>(x.size() - 1);
  return std::sqrt(v / static_cast<double>(x.size()));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome quadratic_variation_concentrates() {
  // Var[QV] = 2 sum dt^2 = 2/N, so sd = 0.0045 at N = 1e5 and the band
  // [0.98, 1.02] is about 4.5 sd wide on each side.
  const auto p = Partition::uniform_grid(1.0, 100'000);
  int inside = 0;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    GaussianStream s(1, i);
    const double qv = quadratic_variation(sample_bm_on(p, s), p);
    worst = std::max(worst, std::abs(qv - 1.0));
    if (qv >= 0.98 && qv <= 1.02) ++inside;
  }
  return {inside >= 95, fmt("%d/100 in [0.98, 1.02], max |QV-1| = %.4f, oracle sd = %.4f", inside, worst, std::sqrt(2e-5))};
}

Outcome exact_sum_identities() {
  double worst_ito = 0.0, worst_strat = 0.0;
  std::uniform_real_distribution<double> gap(1e-4, 1e-2);
  for (std::uint64_t g = 0; g < 20; ++g) {
    std::vector<double> t{0.0};
    const std::size_t n = 1000 + 500 * g;
    for (std::size_t k = 0; k < n; ++k) t.push_back(t.back() + gap(test_rng));
    const auto part = Partition::from_points(t);
    GaussianStream s(2, g);
    const auto b = sample_bm_on(part, s);
    const auto y = sample_bm_on(part, s);
    const double qv = quadratic_variation(b, part);
    const double lhs = ito_sum(b, b);
    const double rhs = 0.5 * b.back() * b.back() - 0.5 * qv;
    worst_ito = std::max(worst_ito, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    double half = 0.0;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) half += 0.5 * (b[k + 1] - b[k]) * (y[k + 1] - y[k]);
    const double diff = stratonovich_sum(b, y) - ito_sum(b, y);
    worst_strat = std::max(worst_strat, std::abs(diff - half) / std::max(1.0, std::abs(half)));
  }
  return {worst_ito <= 1e-12 && worst_strat <= 1e-12,
          fmt("max rel err: Ito identity %.2e, Strat-Ito identity %.2e (20 grids)", worst_ito, worst_strat)};
}

Outcome endpoint_order() {
  const auto p = Partition::uniform_grid(1.0, 100'000);
  GaussianStream s(3, 0);
  const auto b = sample_bm_on(p, s);
  const double qv = quadratic_variation(b);
  const double bb = right_endpoint_sum(b, b) - ito_sum(b, b);
  const double rel = std::abs(bb - qv) / qv;
  const double tt = std::abs(right_endpoint_sum(p.points, b) - ito_sum(p.points, b));
  return {rel <= 1e-12 && tt < 1e-2, fmt("B: |(R-L) - QV|/QV = %.2e; t: |R-L| = %.2e at N=1e5", rel, tt)};
}

Outcome euler_maruyama_strong_order() {
  // dX = X/2 dt + X dB has X(1) = exp(B(1)); errors at N = 2^6..2^12 on
  // coupled increments.
  DiffusionSpec spec;
  spec.drift = [](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return 0.5 * x; };
  spec.diffusion = [](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd { return x; };
  const std::size_t fine = 1u << 12;
  const auto times = Partition::uniform_grid(1.0, fine).points;
  std::vector<std::size_t> levels;
  for (int k = 6; k <= 12; ++k) levels.push_back(std::size_t{1} << k);
  std::vector<double> err(levels.size(), 0.0);
  constexpr int paths = 2000;
  for (int i = 0; i < paths; ++i) {
    GaussianStream s(4, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXd inc = brownian_increments(times, 1, s);
    const double exact = std::exp(inc.sum());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto grid = Partition::uniform_grid(1.0, levels[l]).points;
      const double x = euler_maruyama_driven(spec, Eigen::VectorXd::Ones(1), grid, coarsen_increments(inc, fine / levels[l])).back()(0);
      err[l] += std::abs(x - exact) / paths;
    }
  }
  // Least-squares slope of log err against log h.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const double x = std::log(1.0 / static_cast<double>(levels[l]));
    const double y = std::log(err[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope >= 0.35 && slope <= 0.65,
          fmt("slope %.3f (err %.4f at N=64, %.4f at N=4096, %d paths)", slope, err.front(), err.back(), paths)};
}

Outcome stratonovich_consistency() {
  const ScalarStratonovich sde{[](double, double x) { return x; }, [](double, double) { return 1.0; }};
  const auto ito = strat_to_ito(sde);
  const auto times = Partition::uniform_grid(1.0, 10'000).points;
  constexpr int paths = 2000;
  std::vector<double> d(paths), ad(paths);
  for (int i = 0; i < paths; ++i) {
    GaussianStream s(5, static_cast<std::uint64_t>(i));
    const Eigen::MatrixXd inc = brownian_increments(times, 1, s);
    const double h = heun_stratonovich_driven(sde, 1.0, times, inc).back()(0);
    const double e = euler_maruyama_driven(ito, Eigen::VectorXd::Ones(1), times, inc).back()(0);
    d[i] = h - e;
    ad[i] = std::abs(d[i]);
  }
  const double m = mean_of(d);
  const double se = se_of(d);
  return {std::abs(m) <= 3.0 * se,
          fmt("mean(Heun - EM) = %.2e, SE = %.2e, mean |diff| = %.2e (dt=1e-4, %d paths)", m, se, mean_of(ad), paths)};
}

Outcome sphere_development() {
  const Point north = Eigen::Vector3d(0, 0, 1);
  const auto frame = canonical_sphere_frame(north);
  Path line{ManifoldSpec::euclidean(2), {}, {}};
  for (int k = 0; k <= 1000; ++k) {
    line.times.push_back(0.003 * k);
    line.points.push_back(Eigen::Vector2d(0.003 * k, 0.0));
  }
  const Path dev = develop(north, frame, line);
  double line_err = 0.0;
  for (std::size_t k = 0; k < dev.size(); ++k) {
    const double t = line.times[k];
    line_err = std::max(line_err, (dev.points[k] - Eigen::Vector3d(std::sin(t), 0.0, std::cos(t))).norm());
  }
  double trip = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Path plane{ManifoldSpec::euclidean(2), {0.0}, {Eigen::Vector2d::Zero()}};
    for (int k = 1; k <= 200; ++k) {
      plane.times.push_back(0.01 * k);
      plane.points.push_back(plane.points.back() + 0.1 * Eigen::Vector2d(test_normal(), test_normal()));
    }
    const Point p0 = Eigen::Vector3d(test_normal(), test_normal(), test_normal()).normalized();
    const auto f0 = canonical_sphere_frame(p0);
    const Path back = antidevelop(develop(p0, f0, plane), f0);
    for (std::size_t k = 0; k < plane.size(); ++k) trip = std::max(trip, (back.points[k] - plane.points[k]).norm());
  }
  return {line_err <= 1e-12 && trip <= 1e-8, fmt("line err %.2e, round-trip sup err %.2e (100 paths)", line_err, trip)};
}

Outcome manifold_membership(const std::vector<Eigen::MatrixXd>& so2_samples, const std::vector<Eigen::MatrixXd>& so3_samples) {
  double worst = 0.0;
  std::size_t points = 0;
  const SimConfig cfg{10.0, 1e-3, 10, 8};
  for (const auto& m : {ManifoldSpec::sphere(3), ManifoldSpec::sphere(5), ManifoldSpec::special_orthogonal(2),
                        ManifoldSpec::special_orthogonal(3), ManifoldSpec::special_orthogonal(4)}) {
    for (const auto& p : simulate_bm_ensemble(m, m.origin(), cfg)) {
      worst = std::max(worst, p.max_membership_error());
      points += p.size();
    }
  }
  for (int n = 2; n <= 5; ++n) {
    const int d = so_algebra_dim(n);
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = test_normal();
    const BrownianDistParams params(test_rotation(n), a * a.transpose() / d);
    for (std::uint64_t id = 0; id < 5; ++id) {
      GaussianStream s(9, id);
      const Path p = simulate_left_bm(params, SimConfig{10.0, 1e-3, 1, 0}, s);
      worst = std::max(worst, p.max_membership_error());
      points += p.size();
    }
  }
  const auto so2 = ManifoldSpec::special_orthogonal(2);
  const auto so3 = ManifoldSpec::special_orthogonal(3);
  for (const auto& w : so2_samples) worst = std::max(worst, membership_error(so2, flatten(w)));
  for (const auto& w : so3_samples) worst = std::max(worst, membership_error(so3, flatten(w)));
  points += so2_samples.size() + so3_samples.size();
  return {worst <= 1e-9, fmt("max membership error %.2e over %zu points", worst, points)};
}

Outcome so2_estimation(std::vector<Eigen::MatrixXd>& keep) {
  const double sigma2 = 0.25;
  const Eigen::MatrixXd g = rotation2(0.7);
  const BrownianDistParams params(g, Eigen::MatrixXd::Constant(1, 1, sigma2));
  constexpr std::size_t m = 100'000;
  // E W = exp(-sigma2/2) g; the Frobenius error of the mean has
  // E||.||^2 = 2 (1 - exp(-sigma2)) / m.
  const double se_f = std::sqrt(2.0 * (1.0 - std::exp(-sigma2)) / m);
  int good = 0;
  double worst_s = 0.0, worst_d = 0.0, worst_f = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto samples = sample_brownian_set(params, 1e-3, m, 100 + seed);
    const auto r = estimate_so2(samples);
    const double ds = std::abs(*r.sigma2_hat - sigma2);
    const double dg = so_distance(r.g_hat, g);
    const double df = (matrix_mean(samples) - std::exp(-sigma2 / 2) * g).norm();
    worst_s = std::max(worst_s, ds);
    worst_d = std::max(worst_d, dg);
    worst_f = std::max(worst_f, df / se_f);
    if (ds <= 0.02 && dg <= 0.02 && df <= 3.0 * se_f) ++good;
    if (seed == 0) keep = std::move(samples);
  }
  return {good >= 9, fmt("%d/10 runs pass; max |s2-0.25| = %.4f, max d(g) = %.4f, max ||mean-EW||/SE = %.2f (SE %.4f)",
                         good, worst_s, worst_d, worst_f, se_f)};
}

const Eigen::MatrixXd& so3_C() {
  static const Eigen::MatrixXd c = Eigen::Vector3d(0.3, 0.2, 0.1).asDiagonal();
  return c;
}

Outcome so3_estimation(std::vector<Eigen::MatrixXd>& samples, Eigen::MatrixXd& g_out) {
  const Eigen::MatrixXd g = matrix_exp(so_basis(3).combine(Eigen::Vector3d(0.4, -1.1, 0.8)));
  g_out = g;
  samples = sample_brownian_set(BrownianDistParams(g, so3_C()), 1e-3, 200'000, 11);
  const auto r = estimate_so3(samples);
  const double c_err = (*r.C_hat - so3_C()).cwiseAbs().maxCoeff();
  const double g_err = (r.g_hat.transpose() * g - Eigen::MatrixXd::Identity(3, 3)).norm();
  const auto b = so_basis(3);
  double trip = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd c = test_symmetric(3);
    trip = std::max(trip, (so3_C_from_Z(generator_Z(c, b)) - c).norm());
  }
  return {c_err <= 0.03 && g_err <= 0.03 && trip <= 1e-12,
          fmt("max |C_hat - C| = %.4f, ||g_hat^T g - I|| = %.4f, round-trip err %.2e", c_err, g_err, trip)};
}

Outcome generator_spot_values() {
  const double e3 = (generator_Z(Eigen::MatrixXd::Identity(3, 3), so_basis(3)) + Eigen::MatrixXd::Identity(3, 3)).norm();
  const double s2 = 0.37;
  const double e2 = (generator_Z(Eigen::MatrixXd::Constant(1, 1, s2), so_basis(2)) + 0.5 * s2 * Eigen::MatrixXd::Identity(2, 2)).norm();
  return {e3 <= 1e-15 && e2 <= 1e-15, fmt("||Z(I3) + I|| = %.1e, ||Z(s2) + s2/2 I|| = %.1e", e3, e2)};
}

Outcome adjoint_estimator(const std::vector<Eigen::MatrixXd>& samples) {
  const auto b = so_basis(3);
  const auto f = adjoint_rep(b);
  const auto est = estimate_via_representation(samples, f);
  const Eigen::MatrixXd zf = generator_Z(so3_C(), adjoint_derivatives(b));
  const double z_err = (est.Z_f_hat - zf).cwiseAbs().maxCoeff();
  double hom = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd g = test_rotation(3);
    const Eigen::MatrixXd h = test_rotation(3);
    hom = std::max(hom, (f(g * h) - f(g) * f(h)).norm());
  }
  return {z_err <= 0.03 && hom <= 1e-12, fmt("max |Z_f_hat - Z_f| = %.4f, homomorphism err %.2e", z_err, hom)};
}

Outcome series_experiments() {
  const double nat = std::abs(alternating_harmonic(1'000'000, 1'000'000).final_sum() - std::numbers::ln2);
  const double tgt = std::abs(rearrange_to_target(5.0, 10'000'000, 10'000'000).final_sum() - 5.0);
  int agree = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = random_sign_rearrangement(1'000'000, seed, BlockInterleave{}, 1'000'000);
    const double d = std::abs(e.natural.final_sum() - e.permuted.final_sum());
    worst = std::max(worst, d);
    if (d <= 1e-2) ++agree;
  }
  return {nat <= 2e-6 && tgt <= 0.01 && agree >= 99,
          fmt("natural err %.2e, target-5 err %.2e, random signs %d/100 agree (max diff %.2e)", nat, tgt, agree, worst)};
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d %-34s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  std::vector<Eigen::MatrixXd> so2_samples, so3_samples;
  Eigen::MatrixXd so3_g;

  report(1, "quadratic variation", quadratic_variation_concentrates);
  report(2, "exact sum identities", exact_sum_identities);
  report(3, "endpoint order", endpoint_order);
  report(4, "Euler-Maruyama strong order", euler_maruyama_strong_order);
  report(5, "Stratonovich consistency", stratonovich_consistency);
  report(6, "sphere development", sphere_development);
  report(8, "SO(2) estimation", [&] { return so2_estimation(so2_samples); });
  report(9, "SO(3) estimation", [&] { return so3_estimation(so3_samples, so3_g); });
  report(7, "manifold membership", [&] { return manifold_membership(so2_samples, so3_samples); });
  report(10, "generator spot values", generator_spot_values);
  report(11, "adjoint-representation estimator", [&] { return adjoint_estimator(so3_samples); });
  report(12, "series experiments", series_experiments);

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
