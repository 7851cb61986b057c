#include "geostoch/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geostoch/errors.hpp"
#include "geostoch/matrix_functions.hpp"
#include "geostoch/parallel.hpp"

namespace geostoch {

namespace {

constexpr std::size_t kMeanChunk = 4096;
constexpr double kMeanFloor = 1e-12;

struct Recovered {
  Eigen::MatrixXd u;
  Eigen::MatrixXd p;
};

Recovered recover(const Eigen::MatrixXd& y, RecoveryMethod method) {
  if (method == RecoveryMethod::QR) {
    Eigen::MatrixXd q = qr_q(y);
    Eigen::MatrixXd p = sym_part(q.transpose() * y);
    return {std::move(q), std::move(p)};
  }
  auto pd = polar_decompose(y);
  return {std::move(pd.u), std::move(pd.p)};
}

Eigen::MatrixXd log_concentration(const Eigen::MatrixXd& p) {
  try {
    return sym_part(matrix_log_spd(p));
  } catch (const DomainError& e) {
    throw DegenerateError(std::string("sample mean is too diffuse to estimate Z: ") + e.what());
  }
}

void require_samples(const std::vector<Eigen::MatrixXd>& samples, int n, const char* who) {
  if (samples.empty()) throw InputError(std::string(who) + ": no samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].rows() != n || samples[i].cols() != n) {
      std::ostringstream os;
      os << who << ": sample " << i << " is " << samples[i].rows() << "x" << samples[i].cols() << ", expected " << n
         << "x" << n;
      throw InputError(os.str());
    }
  }
}

// PSD projection; returns whether anything was clamped.
bool clamp_psd(const Eigen::MatrixXd& c, Eigen::MatrixXd& out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym_part(c));
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() >= 0.0) {
    out = c;
    return false;
  }
  out = es.eigenvectors() * lam.cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
  return true;
}

EstimationReport start_report(const std::vector<Eigen::MatrixXd>& samples, int n, RecoveryMethod method,
                              Eigen::MatrixXd& p) {
  EstimationReport r;
  r.n = n;
  r.m = samples.size();
  r.method = method;
  const Eigen::MatrixXd y = matrix_mean(samples);
  // Rotation samples have singular values 1, so the mean's are at most 1 and
  // an absolute floor makes sense here (the SVD checks are only relative).
  const Eigen::VectorXd sv = y.jacobiSvd().singularValues();
  if (sv(sv.size() - 1) <= kMeanFloor) {
    std::ostringstream os;
    os << "sample mean is (numerically) singular, singular values [" << sv.transpose() << "]";
    throw DegenerateError(os.str());
  }
  auto rec = recover(y, method);
  r.g_hat = std::move(rec.u);
  p = std::move(rec.p);
  return r;
}

}  // namespace

Eigen::MatrixXd generator_Z(const Eigen::MatrixXd& C, const std::vector<Eigen::MatrixXd>& generators) {
  const auto d = static_cast<Eigen::Index>(generators.size());
  if (d == 0) throw InputError("generator_Z needs at least one generator");
  if (C.rows() != d || C.cols() != d) {
    std::ostringstream os;
    os << "generator_Z: C is " << C.rows() << "x" << C.cols() << " but there are " << d << " generators";
    throw InputError(os.str());
  }
  if ((C - C.transpose()).norm() > 1e-12 * std::max(1.0, C.norm())) throw InputError("generator_Z: C is not symmetric");
  const auto n = generators.front().rows();
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (C(i, j) != 0.0) {
        z.noalias() += (0.5 * C(i, j)) * generators[static_cast<std::size_t>(i)] * generators[static_cast<std::size_t>(j)];
      }
    }
  }
  return z;
}

Eigen::MatrixXd generator_Z(const Eigen::MatrixXd& C, const LieAlgebraBasis& basis) {
  return generator_Z(C, basis.matrices);
}

Eigen::MatrixXd so3_C_from_Z(const Eigen::MatrixXd& Z) {
  if (Z.rows() != 3 || Z.cols() != 3) throw InputError("so3_C_from_Z needs a 3x3 matrix");
  // With the canonical basis, Z = 1/2 sum C_ij A_i A_j reads
  //   Z = -1/2 [[c11 + c22, c23, -c13], [c23, c11 + c33, c12], [-c13, c12, c22 + c33]].
  const double tr = Z.trace();
  Eigen::MatrixXd c(3, 3);
  c(0, 0) = -tr + 2.0 * Z(2, 2);
  c(1, 1) = -tr + 2.0 * Z(1, 1);
  c(2, 2) = -tr + 2.0 * Z(0, 0);
  c(1, 2) = c(2, 1) = -(Z(0, 1) + Z(1, 0));
  c(0, 2) = c(2, 0) = Z(0, 2) + Z(2, 0);
  c(0, 1) = c(1, 0) = -(Z(1, 2) + Z(2, 1));
  return c;
}

Eigen::MatrixXd matrix_mean(const std::vector<Eigen::MatrixXd>& samples) {
  if (samples.empty()) throw InputError("matrix_mean: no samples");
  const auto rows = samples.front().rows();
  const auto cols = samples.front().cols();
  const std::size_t chunks = (samples.size() + kMeanChunk - 1) / kMeanChunk;
  std::vector<Eigen::MatrixXd> sums(chunks), comps(chunks);
  for_each_index(chunks, [&](std::size_t c) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(rows, cols);
    const std::size_t end = std::min(samples.size(), (c + 1) * kMeanChunk);
    for (std::size_t i = c * kMeanChunk; i < end; ++i) {
      const Eigen::MatrixXd& x = samples[i];
      if (x.rows() != rows || x.cols() != cols) throw InputError("matrix_mean: samples differ in shape");
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double a = sum.data()[k];
        const double b = x.data()[k];
        const double t = a + b;
        comp.data()[k] += std::abs(a) >= std::abs(b) ? (a - t) + b : (b - t) + a;
        sum.data()[k] = t;
      }
    }
    sums[c] = std::move(sum);
    comps[c] = std::move(comp);
  });
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (Eigen::Index k = 0; k < total.size(); ++k) {
      for (const double b : {sums[c].data()[k], comps[c].data()[k]}) {
        const double a = total.data()[k];
        const double t = a + b;
        comp.data()[k] += std::abs(a) >= std::abs(b) ? (a - t) + b : (b - t) + a;
        total.data()[k] = t;
      }
    }
  }
  return (total + comp) / static_cast<double>(samples.size());
}

RecoveryMethod parse_recovery_method(const std::string& s) {
  if (s == "polar") return RecoveryMethod::Polar;
  if (s == "qr") return RecoveryMethod::QR;
  throw InputError("unknown recovery method '" + s + "' (expected polar or qr)");
}

CovarianceStructure parse_covariance_structure(const std::string& s) {
  if (s == "full-z-only" || s == "z-only") return CovarianceStructure::FullZOnly;
  if (s == "diagonal-c" || s == "diagonal") return CovarianceStructure::DiagonalC;
  if (s == "full-c" || s == "full") return CovarianceStructure::FullC;
  throw InputError("unknown structure '" + s + "' (expected full-z-only, diagonal-c or full-c)");
}

std::string to_string(RecoveryMethod m) { return m == RecoveryMethod::QR ? "qr" : "polar"; }

std::string to_string(CovarianceStructure s) {
  switch (s) {
    case CovarianceStructure::FullZOnly:
      return "full-z-only";
    case CovarianceStructure::DiagonalC:
      return "diagonal-c";
    case CovarianceStructure::FullC:
      return "full-c";
  }
  return "full-z-only";
}

EstimationReport estimate_so2(const std::vector<Eigen::MatrixXd>& samples, RecoveryMethod method) {
  require_samples(samples, 2, "estimate_so2");
  Eigen::MatrixXd p;
  EstimationReport r = start_report(samples, 2, method, p);
  r.structure = CovarianceStructure::FullC;
  const double ratio = 0.5 * p.trace();
  if (!(ratio > 0.0)) throw DegenerateError("estimate_so2: sample mean has no positive concentration");
  r.residual = (p - ratio * Eigen::MatrixXd::Identity(2, 2)).norm();
  r.Z_hat = std::log(ratio) * Eigen::MatrixXd::Identity(2, 2);
  const double raw = -2.0 * std::log(ratio);
  r.C_hat = Eigen::MatrixXd::Constant(1, 1, raw);
  r.clamped = ratio >= 1.0;
  r.sigma2_hat = r.clamped ? 0.0 : raw;
  r.C_hat_psd = Eigen::MatrixXd::Constant(1, 1, *r.sigma2_hat);
  return r;
}

EstimationReport estimate_so3(const std::vector<Eigen::MatrixXd>& samples, RecoveryMethod method) {
  require_samples(samples, 3, "estimate_so3");
  Eigen::MatrixXd p;
  EstimationReport r = start_report(samples, 3, method, p);
  r.structure = CovarianceStructure::FullC;
  r.Z_hat = log_concentration(p);
  r.C_hat = so3_C_from_Z(r.Z_hat);
  Eigen::MatrixXd psd;
  r.clamped = clamp_psd(*r.C_hat, psd);
  r.C_hat_psd = std::move(psd);
  r.residual = (generator_Z(*r.C_hat, so_basis(3)) - r.Z_hat).norm();
  return r;
}

std::size_t brownian_parameter_count(int n) {
  const auto d = static_cast<std::size_t>(so_algebra_dim(n));
  return d + d * (d + 1) / 2;
}

EstimationReport estimate_son(const std::vector<Eigen::MatrixXd>& samples, int n, CovarianceStructure structure,
                              RecoveryMethod method) {
  if (n < 2) throw InputError("estimate_son needs n >= 2");
  if (n == 2) return estimate_so2(samples, method);
  if (n == 3) return estimate_so3(samples, method);
  if (structure == CovarianceStructure::FullC) {
    std::ostringstream os;
    os << "full C is not identifiable on SO(" << n << "): (g, C) has d + d(d+1)/2 = " << brownian_parameter_count(n)
       << " parameters but the mean has only n^2 = " << n * n << " entries";
    throw UnsupportedError(os.str());
  }
  require_samples(samples, n, "estimate_son");
  Eigen::MatrixXd p;
  EstimationReport r = start_report(samples, n, method, p);
  r.structure = structure;
  r.Z_hat = log_concentration(p);
  if (structure == CovarianceStructure::FullZOnly) return r;

  // diag(Z) is linear in the diagonal of C: column i holds diag(A_i^2) / 2.
  const LieAlgebraBasis basis = so_basis(n);
  const int d = basis.dim();
  Eigen::MatrixXd design(n, d);
  for (int i = 0; i < d; ++i) {
    const auto& a = basis.matrices[static_cast<std::size_t>(i)];
    design.col(i) = 0.5 * (a * a).diagonal();
  }
  const Eigen::VectorXd c = design.completeOrthogonalDecomposition().solve(r.Z_hat.diagonal());
  r.C_hat = Eigen::MatrixXd(c.asDiagonal());
  r.C_hat_psd = Eigen::MatrixXd(c.cwiseMax(0.0).asDiagonal());
  r.clamped = c.minCoeff() < 0.0;
  r.residual = (generator_Z(*r.C_hat, basis) - r.Z_hat).norm();
  return r;
}

Representation adjoint_rep(const LieAlgebraBasis& basis) {
  return [basis](const Eigen::MatrixXd& g) {
    if (g.rows() != basis.n || g.cols() != basis.n) throw InputError("adjoint_rep: group element has the wrong size");
    const int d = basis.dim();
    Eigen::MatrixXd f(d, d);
    for (int j = 0; j < d; ++j) {
      const Eigen::MatrixXd conj = g * basis.matrices[static_cast<std::size_t>(j)] * g.transpose();
      for (int i = 0; i < d; ++i) f(i, j) = half_trace_inner(basis.matrices[static_cast<std::size_t>(i)], conj);
    }
    return f;
  };
}

std::vector<Eigen::MatrixXd> adjoint_derivatives(const LieAlgebraBasis& basis) {
  const int d = basis.dim();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const auto& ak = basis.matrices[static_cast<std::size_t>(k)];
    Eigen::MatrixXd a(d, d);
    for (int j = 0; j < d; ++j) {
      const auto& aj = basis.matrices[static_cast<std::size_t>(j)];
      const Eigen::MatrixXd bracket = ak * aj - aj * ak;
      for (int i = 0; i < d; ++i) a(i, j) = half_trace_inner(basis.matrices[static_cast<std::size_t>(i)], bracket);
    }
    out.push_back(std::move(a));
  }
  return out;
}

RepresentationEstimate estimate_via_representation(const std::vector<Eigen::MatrixXd>& samples,
                                                   const Representation& f, RecoveryMethod method) {
  if (samples.empty()) throw InputError("estimate_via_representation: no samples");
  std::vector<Eigen::MatrixXd> images(samples.size());
  for_each_index(samples.size(), [&](std::size_t i) { images[i] = f(samples[i]); });
  auto rec = recover(matrix_mean(images), method);
  return {std::move(rec.u), log_concentration(rec.p), samples.size()};
}

}  // namespace geostoch
