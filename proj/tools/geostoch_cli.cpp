// geostoch command-line front end. Every run prints one JSON line with the
// resolved configuration and a result summary on stdout.
//
// Exit codes: 0 success, 2 bad input / usage, 3 numerical or degenerate failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geostoch/errors.hpp"
#include "geostoch/estimation.hpp"
#include "geostoch/io.hpp"
#include "geostoch/liegroup.hpp"
#include "geostoch/matrix_functions.hpp"
#include "geostoch/parallel.hpp"
#include "geostoch/process_sim.hpp"
#include "geostoch/series.hpp"
#include "geostoch/stochastic_integrals.hpp"

using json = nlohmann::json;
using namespace geostoch;

namespace {

constexpr const char* kBasisNote =
    "so(n) basis A_k = E_ji - E_ij over pairs i < j in lexicographic order, orthonormal under <X,Y> = tr(Y^T X)/2; "
    "C is the covariance of the coefficients in this basis";

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string cell;
  std::istringstream ss(text);
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && cell[used] == ' ') ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": cannot parse '" + cell + "'");
    }
  }
  return out;
}

// Row-major list of k*k numbers.
Eigen::MatrixXd parse_square(const std::string& text, Eigen::Index k, const char* what) {
  const auto v = parse_list(text, what);
  if (static_cast<Eigen::Index>(v.size()) != k * k) {
    throw InputError(std::string(what) + " needs " + std::to_string(k * k) + " comma-separated numbers (row-major)");
  }
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k; ++c) m(r, c) = v[static_cast<std::size_t>(r * k + c)];
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open '" + path + "' for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open '" + path + "'");
  return is;
}

void emit(const json& summary) { std::cout << summary.dump() << '\n'; }

struct TimeOptions {
  double T = 1.0;
  double dt = 1e-3;
  std::size_t paths = 1;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--T", T, "time horizon")->capture_default_str();
    app->add_option("--dt", dt, "step size")->capture_default_str();
    app->add_option("--paths", paths, "number of paths")->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
  }
  SimConfig config() const {
    SimConfig cfg{T, dt, paths, seed};
    cfg.validate();
    return cfg;
  }
  json to_json() const { return {{"T", T}, {"dt", dt}, {"paths", paths}, {"seed", seed}}; }
};

// Group parameters shared by lie-bm and sample.
struct GroupOptions {
  std::string group = "so:3";
  std::optional<double> sigma2;
  std::string C;
  std::string C_diag;
  std::string g;
  std::optional<double> g_angle;

  void add(CLI::App* app) {
    app->add_option("--group", group, "so:n")->capture_default_str();
    app->add_option("--sigma2", sigma2, "isotropic variance, C = sigma2 I");
    app->add_option("--C", C, "full covariance, d*d numbers row-major");
    app->add_option("--C-diag", C_diag, "diagonal of C, d numbers");
    app->add_option("--g", g, "location, n*n numbers row-major");
    app->add_option("--g-angle", g_angle, "SO(2) location as a rotation angle");
  }

  BrownianDistParams params() const {
    const auto m = ManifoldSpec::parse(group);
    if (!m.is_so()) throw InputError("--group must be so:n");
    const int n = m.n();
    const int d = so_algebra_dim(n);
    if (d < 1) throw InputError("--group needs n >= 2");
    const int given = (sigma2 ? 1 : 0) + (C.empty() ? 0 : 1) + (C_diag.empty() ? 0 : 1);
    if (given > 1) throw InputError("give at most one of --sigma2, --C, --C-diag");
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d);
    if (sigma2) cov *= *sigma2;
    if (!C.empty()) cov = parse_square(C, d, "--C");
    if (!C_diag.empty()) {
      const auto v = parse_list(C_diag, "--C-diag");
      if (static_cast<int>(v.size()) != d) throw InputError("--C-diag needs " + std::to_string(d) + " numbers");
      cov = Eigen::Map<const Eigen::VectorXd>(v.data(), d).asDiagonal();
    }
    Eigen::MatrixXd loc = Eigen::MatrixXd::Identity(n, n);
    if (g_angle && !g.empty()) throw InputError("give at most one of --g, --g-angle");
    if (g_angle) {
      if (n != 2) throw InputError("--g-angle is only defined for so:2");
      loc = rotation2(*g_angle);
    }
    if (!g.empty()) loc = parse_square(g, n, "--g");
    return BrownianDistParams(loc, cov);
  }
};

json params_json(const BrownianDistParams& p) {
  return {{"n", p.n()}, {"g", matrix_json(p.g)}, {"C", matrix_json(p.C())}};
}

int run_bm(const std::string& manifold, const TimeOptions& t, const std::string& out) {
  const auto m = ManifoldSpec::parse(manifold);
  const auto cfg = t.config();
  const auto paths = simulate_bm_ensemble(m, m.origin(), cfg);
  double worst = 0.0;
  for (const auto& p : paths) worst = std::max(worst, p.max_membership_error());
  if (!out.empty()) {
    auto os = open_out(out);
    write_paths_long_csv(os, paths);
  }
  json cfg_json = t.to_json();
  cfg_json["manifold"] = m.to_string();
  cfg_json["out"] = out;
  const auto& last = paths.front().back();
  emit({{"command", "bm"},
        {"config", cfg_json},
        {"steps", paths.front().size() - 1},
        {"max_membership_error", worst},
        {"first_path_end", std::vector<double>(last.data(), last.data() + last.size())}});
  return 0;
}

int run_develop(const std::string& in, const TimeOptions& t, const std::string& out) {
  const auto sphere = ManifoldSpec::sphere(3);
  const Point p0 = sphere.origin();
  Path plane{ManifoldSpec::euclidean(2), {}, {}};
  if (!in.empty()) {
    auto is = open_in(in);
    plane = read_path_csv(is, ManifoldSpec::euclidean(2));
    plane.validate();
  } else {
    GaussianStream s(t.seed, 0);
    plane = simulate_bm_euclidean(2, t.config(), s);
  }
  const Path rolled = develop(p0, canonical_sphere_frame(p0), plane);
  if (!out.empty()) {
    auto os = open_out(out);
    write_path_csv(os, rolled);
  }
  json cfg_json = t.to_json();
  cfg_json["in"] = in;
  cfg_json["out"] = out;
  emit({{"command", "develop"},
        {"config", cfg_json},
        {"points", rolled.size()},
        {"max_membership_error", rolled.max_membership_error()}});
  return 0;
}

int run_antidevelop(const std::string& in, const std::string& out) {
  auto is = open_in(in);
  Path sphere_path = read_path_csv(is, ManifoldSpec::sphere(3));
  sphere_path.validate();
  const Path plane = antidevelop(sphere_path, canonical_sphere_frame(sphere_path.points.front()));
  if (!out.empty()) {
    auto os = open_out(out);
    write_path_csv(os, plane);
  }
  const auto& end = plane.back();
  emit({{"command", "antidevelop"},
        {"config", {{"in", in}, {"out", out}}},
        {"points", plane.size()},
        {"end", {end(0), end(1)}}});
  return 0;
}

int run_integrate(const std::string& experiment, std::size_t N, std::size_t seeds, double T, std::uint64_t seed,
                  const std::string& out) {
  if (seeds == 0) throw InputError("--seeds must be positive");
  if (experiment != "qv" && experiment != "ito" && experiment != "strat" && experiment != "endpoint") {
    throw InputError("unknown experiment '" + experiment + "' (expected qv, ito, strat or endpoint)");
  }
  const auto partition = Partition::uniform_grid(T, N);
  std::vector<double> values(seeds);
  for_each_index(seeds, [&](std::size_t i) {
    GaussianStream s(seed + i, 0);
    const auto b = sample_bm_on(partition, s);
    if (experiment == "qv") {
      values[i] = quadratic_variation(b);
    } else if (experiment == "ito") {
      values[i] = ito_sum(b, b);
    } else if (experiment == "strat") {
      values[i] = stratonovich_sum(b, b);
    } else {
      values[i] = right_endpoint_sum(b, b) - ito_sum(b, b);
    }
  });
  json records = json::array();
  double mean = 0.0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < seeds; ++i) {
    records.push_back({{"name", experiment}, {"N", N}, {"seed", seed + i}, {"value", values[i]}});
    mean += values[i] / static_cast<double>(seeds);
    if (std::abs(values[i] - T) <= 0.02 * T) ++within;
  }
  if (!out.empty()) {
    auto os = open_out(out);
    os << records.dump(1) << '\n';
  }
  json summary = {{"command", "integrate"},
                  {"config", {{"experiment", experiment}, {"N", N}, {"seeds", seeds}, {"T", T}, {"seed", seed}, {"out", out}}},
                  {"mean", mean}};
  if (experiment == "qv" || experiment == "endpoint") summary["within_2_percent_of_T"] = within;
  if (out.empty()) summary["records"] = records;
  emit(summary);
  return 0;
}

int run_sde(const std::string& scheme, const std::string& model, double mu, double sigma, double x0,
            const TimeOptions& t, const std::string& out) {
  const auto cfg = t.config();
  const double theta = mu;
  std::vector<Path> paths(cfg.n_paths);
  if (scheme == "heun") {
    if (model != "strat-linear") throw InputError("heun integrates the Stratonovich model strat-linear only");
    const ScalarStratonovich sde{[sigma](double, double x) { return sigma * x; }, [sigma](double, double) { return sigma; }};
    for_each_index(cfg.n_paths, [&](std::size_t i) {
      GaussianStream s(cfg.seed, i);
      paths[i] = heun_stratonovich(sde, x0, cfg, s);
    });
  } else if (scheme == "em") {
    DiffusionSpec spec;
    if (model == "gbm") {
      spec.drift = [mu](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return mu * x; };
      spec.diffusion = [sigma](double, const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Constant(1, 1, sigma * x(0));
      };
    } else if (model == "ou") {
      spec.drift = [theta](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return -theta * x; };
      spec.diffusion = [sigma](double, const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Constant(1, 1, sigma);
      };
    } else if (model == "strat-linear") {
      spec = strat_to_ito({[sigma](double, double x) { return sigma * x; }, [sigma](double, double) { return sigma; }});
    } else {
      throw InputError("unknown model '" + model + "' (expected gbm, ou or strat-linear)");
    }
    const Eigen::VectorXd start = Eigen::VectorXd::Constant(1, x0);
    for_each_index(cfg.n_paths, [&](std::size_t i) {
      GaussianStream s(cfg.seed, i);
      paths[i] = euler_maruyama(spec, start, cfg, s);
    });
  } else {
    throw InputError("unknown scheme '" + scheme + "' (expected em or heun)");
  }
  if (!out.empty()) {
    auto os = open_out(out);
    write_paths_long_csv(os, paths);
  }
  double mean_end = 0.0;
  for (const auto& p : paths) mean_end += p.back()(0) / static_cast<double>(paths.size());
  json cfg_json = t.to_json();
  cfg_json.update({{"scheme", scheme}, {"model", model}, {"mu", mu}, {"sigma", sigma}, {"x0", x0}, {"out", out}});
  emit({{"command", "sde"}, {"config", cfg_json}, {"mean_endpoint", mean_end}});
  return 0;
}

int run_lie_bm(const GroupOptions& g, const TimeOptions& t, const std::string& out) {
  const auto params = g.params();
  const auto cfg = t.config();
  std::vector<Path> paths(cfg.n_paths);
  for_each_index(cfg.n_paths, [&](std::size_t i) {
    GaussianStream s(cfg.seed, i);
    paths[i] = simulate_left_bm(params, cfg, s);
  });
  double worst = 0.0;
  for (const auto& p : paths) worst = std::max(worst, p.max_membership_error());
  if (!out.empty()) {
    auto os = open_out(out);
    write_paths_long_csv(os, paths);
  }
  json cfg_json = t.to_json();
  cfg_json["params"] = params_json(params);
  cfg_json["out"] = out;
  emit({{"command", "lie-bm"}, {"config", cfg_json}, {"max_membership_error", worst}, {"basis", kBasisNote}});
  return 0;
}

int run_sample(const GroupOptions& g, std::size_t m, double delta, std::uint64_t seed, const std::string& out) {
  const auto params = g.params();
  const auto samples = sample_brownian_set(params, delta, m, seed);
  json meta = params_json(params);
  meta.update({{"delta", delta}, {"seed", seed}, {"m", m}, {"basis", kBasisNote}});
  if (!out.empty()) {
    auto os = open_out(out);
    write_matrix_samples_csv(os, samples);
    auto ms = open_out(out + ".json");
    ms << meta.dump(1) << '\n';
  }
  meta["out"] = out;
  emit({{"command", "sample"}, {"config", meta}, {"mean", matrix_json(matrix_mean(samples))}});
  return 0;
}

json report_json(const EstimationReport& r) {
  json j = {{"n", r.n},
            {"g_hat", matrix_json(r.g_hat)},
            {"Z_hat", matrix_json(r.Z_hat)},
            {"C_hat", r.C_hat ? matrix_json(*r.C_hat) : json(nullptr)},
            {"C_hat_psd", r.C_hat_psd ? matrix_json(*r.C_hat_psd) : json(nullptr)},
            {"sigma2_hat", r.sigma2_hat ? json(*r.sigma2_hat) : json(nullptr)},
            {"m", r.m},
            {"clamped", r.clamped},
            {"residual", r.residual},
            {"method", to_string(r.method)},
            {"structure", to_string(r.structure)},
            {"basis", kBasisNote}};
  return j;
}

int run_estimate(const std::string& group, const std::string& in, const std::string& structure,
                 const std::string& method, bool adjoint, const std::string& out) {
  const auto m = ManifoldSpec::parse(group);
  if (!m.is_so()) throw InputError("--group must be so:n");
  auto is = open_in(in);
  const auto samples = read_matrix_samples_csv(is);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].rows() != m.n()) throw InputError("samples in '" + in + "' are not " + m.to_string() + " matrices");
  }
  const auto rec = parse_recovery_method(method);
  const auto report = estimate_son(samples, m.n(), parse_covariance_structure(structure), rec);
  json j = report_json(report);
  if (adjoint) {
    const auto basis = so_basis(m.n());
    const auto est = estimate_via_representation(samples, adjoint_rep(basis), rec);
    j["adjoint"] = {{"f_g_hat", matrix_json(est.f_g_hat)}, {"Z_f_hat", matrix_json(est.Z_f_hat)}};
  }
  if (!out.empty()) {
    auto os = open_out(out);
    os << j.dump(1) << '\n';
  }
  emit({{"command", "estimate"},
        {"config",
         {{"group", m.to_string()}, {"in", in}, {"structure", structure}, {"method", method}, {"adjoint", adjoint}, {"out", out}}},
        {"report", j}});
  return 0;
}

json trace_json(const SeriesTrace& t) { return {{"terms", t.terms}, {"partial_sums", t.partial_sums}}; }

int run_series(const std::string& experiment, std::size_t N, double target, std::size_t seeds, std::uint64_t seed,
               std::size_t stride, const std::string& out) {
  json result;
  if (experiment == "natural") {
    const auto tr = alternating_harmonic(N, stride);
    result = {{"final", tr.final_sum()}, {"ln2", std::numbers::ln2}, {"trace", trace_json(tr)}};
  } else if (experiment == "target") {
    const auto tr = rearrange_to_target(target, N, stride);
    result = {{"final", tr.final_sum()}, {"target", target}, {"trace", trace_json(tr)}};
  } else if (experiment == "random") {
    if (seeds == 0) throw InputError("--seeds must be positive");
    std::vector<RandomSignExperiment> runs(seeds);
    for_each_index(seeds, [&](std::size_t i) { runs[i] = random_sign_rearrangement(N, seed + i, BlockInterleave{}, stride); });
    json records = json::array();
    std::size_t agree = 0;
    for (std::size_t i = 0; i < seeds; ++i) {
      const double diff = runs[i].permuted.final_sum() - runs[i].natural.final_sum();
      if (std::abs(diff) <= 1e-2) ++agree;
      records.push_back({{"seed", seed + i},
                         {"natural", runs[i].natural.final_sum()},
                         {"permuted", runs[i].permuted.final_sum()},
                         {"difference", diff}});
    }
    result = {{"records", records}, {"agree_within_0.01", agree}};
  } else {
    throw InputError("unknown experiment '" + experiment + "' (expected natural, target or random)");
  }
  if (!out.empty()) {
    auto os = open_out(out);
    os << result.dump(1) << '\n';
  }
  json summary = {{"command", "series"},
                  {"config",
                   {{"experiment", experiment}, {"N", N}, {"target", target}, {"seeds", seeds}, {"seed", seed},
                    {"stride", stride}, {"out", out}}}};
  if (out.empty()) {
    summary["result"] = result;
  } else if (result.contains("final")) {
    summary["final"] = result["final"];
  } else {
    summary["agree_within_0.01"] = result["agree_within_0.01"];
  }
  emit(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and estimation of Brownian motion on R^n, spheres and SO(n)"};
  app.require_subcommand(1);

  std::string out;
  std::string in;

  auto* bm = app.add_subcommand("bm", "Brownian motion by geodesic random walk");
  std::string manifold = "euclid:1";
  TimeOptions bm_t;
  bm->add_option("--manifold", manifold, "euclid:n, sphere:n (unit sphere in R^n) or so:n")->capture_default_str();
  bm_t.add(bm);
  bm->add_option("--out", out, "CSV output (path_id,t,c1,...)");

  auto* dev = app.add_subcommand("develop", "roll S^2 along a planar path from the north pole");
  TimeOptions dev_t;
  dev_t.add(dev);
  dev->add_option("--in", in, "planar path CSV (t,c1,c2); planar Brownian motion when omitted");
  dev->add_option("--out", out, "sphere path CSV");

  auto* anti = app.add_subcommand("antidevelop", "unroll an S^2 path onto the plane");
  anti->add_option("--in", in, "sphere path CSV (t,c1,c2,c3)")->required();
  anti->add_option("--out", out, "planar path CSV");

  auto* integ = app.add_subcommand("integrate", "partition-sum experiments on Brownian paths");
  std::string experiment = "qv";
  std::size_t N = 100000;
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  double T = 1.0;
  integ->add_option("--experiment", experiment, "qv, ito, strat or endpoint")->capture_default_str();
  integ->add_option("--N", N, "partition intervals")->capture_default_str();
  integ->add_option("--seeds", seeds, "number of seeds, starting at --seed")->capture_default_str();
  integ->add_option("--seed", seed, "first seed")->capture_default_str();
  integ->add_option("--T", T, "horizon")->capture_default_str();
  integ->add_option("--out", out, "JSON records");

  auto* sde = app.add_subcommand("sde", "scalar SDE paths");
  std::string scheme = "em";
  std::string model = "gbm";
  double mu = 0.0;
  double sigma = 1.0;
  double x0 = 1.0;
  TimeOptions sde_t;
  sde->add_option("--scheme", scheme, "em or heun")->capture_default_str();
  sde->add_option("--model", model, "gbm (dX = mu X dt + sigma X dB), ou (dX = -mu X dt + sigma dB), strat-linear (dX = sigma X o dB)")
      ->capture_default_str();
  sde->add_option("--mu", mu)->capture_default_str();
  sde->add_option("--sigma", sigma)->capture_default_str();
  sde->add_option("--x0", x0)->capture_default_str();
  sde_t.add(sde);
  sde->add_option("--out", out, "CSV output");

  auto* lie = app.add_subcommand("lie-bm", "coloured left-invariant Brownian motion on SO(n)");
  GroupOptions lie_g;
  TimeOptions lie_t;
  lie_g.add(lie);
  lie_t.add(lie);
  lie->add_option("--out", out, "CSV output of flattened matrices");

  auto* sample = app.add_subcommand("sample", "draw from the Brownian distribution N(g, C) on SO(n)");
  GroupOptions sample_g;
  std::size_t m = 1000;
  double delta = 1e-3;
  sample_g.add(sample);
  sample->add_option("--m", m, "sample count")->capture_default_str();
  sample->add_option("--delta", delta, "step size, 1/delta must be an integer")->capture_default_str();
  sample->add_option("--seed", seed, "master seed")->capture_default_str();
  sample->add_option("--out", out, "sample CSV; metadata goes to <out>.json");

  auto* est = app.add_subcommand("estimate", "estimate (g, C) from SO(n) samples");
  std::string group = "so:3";
  std::string structure = "diagonal-c";
  std::string method = "polar";
  bool adjoint = false;
  est->add_option("--group", group, "so:n")->capture_default_str();
  est->add_option("--in", in, "sample CSV")->required();
  est->add_option("--structure", structure, "full-z-only, diagonal-c or full-c (n >= 4)")->capture_default_str();
  est->add_option("--method", method, "polar or qr")->capture_default_str();
  est->add_flag("--adjoint", adjoint, "also run the adjoint-representation estimator");
  est->add_option("--out", out, "JSON report");

  auto* series = app.add_subcommand("series", "rearrangements of sum +-1/n");
  std::string series_exp = "natural";
  std::size_t series_N = 1000000;
  double target = 5.0;
  std::size_t series_seeds = 1;
  std::size_t stride = 1000;
  series->add_option("--experiment", series_exp, "natural, target or random")->capture_default_str();
  series->add_option("--N", series_N, "number of terms")->capture_default_str();
  series->add_option("--target", target, "greedy rearrangement target")->capture_default_str();
  series->add_option("--seeds", series_seeds, "random-sign seeds, starting at --seed")->capture_default_str();
  series->add_option("--seed", seed, "first seed")->capture_default_str();
  series->add_option("--stride", stride, "record every stride-th partial sum")->capture_default_str();
  series->add_option("--out", out, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*bm) return run_bm(manifold, bm_t, out);
    if (*dev) return run_develop(in, dev_t, out);
    if (*anti) return run_antidevelop(in, out);
    if (*integ) return run_integrate(experiment, N, seeds, T, seed, out);
    if (*sde) return run_sde(scheme, model, mu, sigma, x0, sde_t, out);
    if (*lie) return run_lie_bm(lie_g, lie_t, out);
    if (*sample) return run_sample(sample_g, m, delta, seed, out);
    if (*est) return run_estimate(group, in, structure, method, adjoint, out);
    if (*series) return run_series(series_exp, series_N, target, series_seeds, seed, stride, out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate data: " << e.what() << '\n';
    return 3;
  } catch (const DivergedError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return 3;
  }
  std::cerr << app.help();
  return 2;
}
