#include <gtest/gtest.h>

#include <cmath>

#include "geostoch/errors.hpp"
#include "geostoch/estimation.hpp"
#include "geostoch/matrix_functions.hpp"
#include "test_util.hpp"

using namespace geostoch;

namespace {

Eigen::MatrixXd rot_axis(int axis, double theta) {
  // Rotation by theta about coordinate axis `axis`.
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(3, 3);
  const int i = (axis + 1) % 3;
  const int j = (axis + 2) % 3;
  r(i, i) = std::cos(theta);
  r(j, j) = std::cos(theta);
  r(i, j) = -std::sin(theta);
  r(j, i) = std::sin(theta);
  return r;
}

Eigen::MatrixXd diag3(double a, double b, double c) { return Eigen::Vector3d(a, b, c).asDiagonal(); }

const Eigen::MatrixXd kCdiag = diag3(0.3, 0.2, 0.1);

}  // namespace

TEST(GeneratorZ, Examples) {
  const auto b3 = so_basis(3);
  EXPECT_LE((generator_Z(Eigen::MatrixXd::Identity(3, 3), b3) + Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  const auto b2 = so_basis(2);
  EXPECT_LE((generator_Z(Eigen::MatrixXd::Constant(1, 1, 0.36), b2) + 0.18 * Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((generator_Z(diag3(1.0, 2.0, 4.0), b3) + 0.5 * diag3(3.0, 5.0, 6.0)).norm(), 1e-15);
}

TEST(GeneratorZ, LinearAndSymmetric) {
  const auto b = so_basis(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd c1 = testutil::random_symmetric(6);
    const Eigen::MatrixXd c2 = testutil::random_symmetric(6);
    const double a = testutil::normal();
    const double s = testutil::normal();
    const Eigen::MatrixXd z = generator_Z(a * c1 + s * c2, b);
    EXPECT_LE((z - (a * generator_Z(c1, b) + s * generator_Z(c2, b))).norm(), 1e-14 * (1.0 + z.norm()));
    EXPECT_LE((z - z.transpose()).norm(), 1e-14);
  }
}

TEST(GeneratorZ, RejectsBadC) {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 0.1;
  EXPECT_THROW(generator_Z(asym, so_basis(3)), InputError);
  EXPECT_THROW(generator_Z(Eigen::MatrixXd::Identity(2, 2), so_basis(3)), InputError);
}

TEST(So3CFromZ, Examples) {
  EXPECT_LE((so3_C_from_Z(-Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  Eigen::MatrixXd z = -Eigen::MatrixXd::Identity(3, 3);
  z(0, 1) = z(1, 0) = -0.05;
  Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(3, 3);
  expect(1, 2) = expect(2, 1) = 0.1;
  EXPECT_LE((so3_C_from_Z(z) - expect).norm(), 1e-15);
  EXPECT_THROW(so3_C_from_Z(Eigen::MatrixXd::Identity(2, 2)), InputError);
}

TEST(So3CFromZ, RoundTripOnRandomSymmetricC) {
  const auto b = so_basis(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd c = testutil::random_symmetric(3);
    EXPECT_LE((so3_C_from_Z(generator_Z(c, b)) - c).norm(), 1e-12);
  }
}

TEST(MatrixMean, CompensatedAndChunked) {
  // 1 followed by 4096 copies of 2^-60: plain summation drops every small
  // term, the exact total 1 + 2^-48 is representable. Spans two chunks.
  std::vector<Eigen::MatrixXd> xs(4097, Eigen::MatrixXd::Constant(1, 1, std::ldexp(1.0, -60)));
  xs[0](0, 0) = 1.0;
  EXPECT_EQ(matrix_mean(xs)(0, 0), (1.0 + std::ldexp(1.0, -48)) / 4097.0);

  std::vector<Eigen::MatrixXd> r;
  for (int i = 0; i < 9000; ++i) r.push_back(testutil::random_matrix(2, 3));
  Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(2, 3);
  for (const auto& x : r) direct += x;
  EXPECT_LE((matrix_mean(r) - direct / 9000.0).norm(), 1e-13);
}

TEST(MatrixMean, Errors) {
  EXPECT_THROW(matrix_mean({}), InputError);
  EXPECT_THROW(matrix_mean({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)}), InputError);
}

TEST(Parsing, NamesRoundTrip) {
  for (auto m : {RecoveryMethod::Polar, RecoveryMethod::QR}) EXPECT_EQ(parse_recovery_method(to_string(m)), m);
  for (auto s : {CovarianceStructure::FullZOnly, CovarianceStructure::DiagonalC, CovarianceStructure::FullC}) {
    EXPECT_EQ(parse_covariance_structure(to_string(s)), s);
  }
  EXPECT_EQ(parse_covariance_structure("diagonal"), CovarianceStructure::DiagonalC);
  EXPECT_THROW(parse_recovery_method("svd"), InputError);
  EXPECT_THROW(parse_covariance_structure("banded"), InputError);
}

TEST(EstimateSo2, AllSamplesAtG) {
  const Eigen::MatrixXd g = rotation2(0.4);
  const auto r = estimate_so2(std::vector<Eigen::MatrixXd>(10, g));
  EXPECT_LE((r.g_hat - g).norm(), 1e-15);
  ASSERT_TRUE(r.sigma2_hat.has_value());
  EXPECT_NEAR(*r.sigma2_hat, 0.0, 1e-14);
  EXPECT_EQ(r.m, 10u);
}

TEST(EstimateSo2, SymmetricPair) {
  const double theta = 0.6;
  for (auto method : {RecoveryMethod::Polar, RecoveryMethod::QR}) {
    const auto r = estimate_so2({rotation2(theta), rotation2(-theta)}, method);
    EXPECT_LE((r.g_hat - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
    EXPECT_NEAR(*r.sigma2_hat, -2.0 * std::log(std::cos(theta)), 1e-14);
    EXPECT_FALSE(r.clamped);
    EXPECT_LE(r.residual, 1e-15);
  }
}

TEST(EstimateSo2, Errors) {
  EXPECT_THROW(estimate_so2({}), InputError);
  EXPECT_THROW(estimate_so2({rotation2(0.3), rotation2(0.3 + std::numbers::pi)}), DegenerateError);
  EXPECT_THROW(estimate_so2({Eigen::MatrixXd::Identity(3, 3)}), InputError);
}

TEST(EstimateSo2, MonteCarloRecovery) {
  const Eigen::MatrixXd g = rotation2(0.7);
  const auto samples = sample_brownian_set(BrownianDistParams(g, Eigen::MatrixXd::Constant(1, 1, 0.25)), 0.01, 20'000, 3);
  const auto r = estimate_so2(samples);
  // sd of sigma2_hat is about 2 sqrt((1 - e^{-s2}) / (2m)) / e^{-s2/2} ~ 0.005.
  EXPECT_NEAR(*r.sigma2_hat, 0.25, 0.02);
  EXPECT_LE(so_distance(r.g_hat, g), 0.02);
}

TEST(EstimateSo2, ErrorShrinksWithSampleSize) {
  // RMS error of sigma2_hat at m and 4m: ratio near 2. SO(2) increments are
  // exact for any step, so one step per sample suffices.
  const BrownianDistParams params(rotation2(0.2), Eigen::MatrixXd::Constant(1, 1, 0.5));
  double small = 0.0, large = 0.0;
  constexpr int pairs = 200;
  for (int k = 0; k < pairs; ++k) {
    const double a = *estimate_so2(sample_brownian_set(params, 1.0, 500, 1000 + k)).sigma2_hat - 0.5;
    const double b = *estimate_so2(sample_brownian_set(params, 1.0, 2000, 5000 + k)).sigma2_hat - 0.5;
    small += a * a / pairs;
    large += b * b / pairs;
  }
  const double ratio = std::sqrt(small / large);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.7);
}

TEST(EstimateSo3, AllSamplesAtG) {
  const Eigen::MatrixXd g = testutil::random_rotation(3);
  const auto r = estimate_so3(std::vector<Eigen::MatrixXd>(5, g));
  EXPECT_LE((r.g_hat - g).norm(), 1e-14);
  EXPECT_LE(r.Z_hat.norm(), 1e-14);
  EXPECT_LE(r.C_hat->norm(), 1e-13);
}

TEST(EstimateSo3, ConstructedMeanRecoversZ) {
  // Pairs R, R^T about each axis average to diag blocks with cos(theta), so the
  // mean is g exp(Z0) with Z0 = diag(log of the averaged diagonal).
  const Eigen::MatrixXd g = testutil::random_rotation(3);
  const double th[3] = {0.3, 0.5, 0.7};
  std::vector<Eigen::MatrixXd> samples;
  for (int axis = 0; axis < 3; ++axis) {
    samples.push_back(g * rot_axis(axis, th[axis]));
    samples.push_back(g * rot_axis(axis, -th[axis]));
  }
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < 3; ++k) d(k) += (k == axis ? 1.0 : std::cos(th[axis])) / 3.0;
  }
  const Eigen::MatrixXd z0 = Eigen::Vector3d(d.array().log()).asDiagonal();
  for (auto method : {RecoveryMethod::Polar, RecoveryMethod::QR}) {
    const auto r = estimate_so3(samples, method);
    EXPECT_LE((r.g_hat - g).norm(), 1e-12);
    EXPECT_LE((r.Z_hat - z0).norm(), 1e-10);
    EXPECT_LE((*r.C_hat - so3_C_from_Z(z0)).norm(), 1e-10);
    EXPECT_LE(r.residual, 1e-12);
  }
}

TEST(EstimateSo3, EquivariantUnderLeftMultiplication) {
  const auto samples = sample_brownian_set(BrownianDistParams(testutil::random_rotation(3), kCdiag), 0.05, 2000, 4);
  const Eigen::MatrixXd h = testutil::random_rotation(3);
  std::vector<Eigen::MatrixXd> moved;
  for (const auto& y : samples) moved.push_back(h * y);
  const auto a = estimate_so3(samples);
  const auto b = estimate_so3(moved);
  EXPECT_LE((b.g_hat - h * a.g_hat).norm(), 1e-12);
  EXPECT_LE((b.Z_hat - a.Z_hat).norm(), 1e-10);
  EXPECT_LE((a.Z_hat - a.Z_hat.transpose()).norm(), 1e-10);
}

TEST(EstimateSo3, MonteCarloRecovery) {
  const Eigen::MatrixXd g = testutil::random_rotation(3);
  const auto samples = sample_brownian_set(BrownianDistParams(g, kCdiag), 0.01, 20'000, 5);
  const auto r = estimate_so3(samples);
  EXPECT_LE((*r.C_hat - kCdiag).cwiseAbs().maxCoeff(), 0.03) << *r.C_hat;
  EXPECT_LE((r.g_hat.transpose() * g - Eigen::MatrixXd::Identity(3, 3)).norm(), 0.03);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*r.C_hat_psd);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);
}

TEST(EstimateSo3, DiffuseMeanIsDegenerate) {
  // Three rotations by 120 degrees about e3 average to diag(0, 0, 1).
  std::vector<Eigen::MatrixXd> samples;
  for (int k = 0; k < 3; ++k) samples.push_back(rot_axis(2, 2.0 * std::numbers::pi * k / 3.0));
  EXPECT_THROW(estimate_so3(samples), DegenerateError);
}

TEST(EstimateSo3, IndefiniteCIsClampedAndFlagged) {
  // Z0 with a large off-diagonal gives an indefinite C.
  Eigen::MatrixXd c = kCdiag;
  c(0, 1) = c(1, 0) = 0.5;
  const Eigen::MatrixXd y = matrix_exp(generator_Z(c, so_basis(3)));
  const auto r = estimate_so3({y});
  EXPECT_TRUE(r.clamped);
  EXPECT_LE((*r.C_hat - c).norm(), 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*r.C_hat_psd);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);
}

TEST(EstimateSon, DelegatesForTwoAndThree) {
  const auto s2 = sample_brownian_set(BrownianDistParams(rotation2(0.1), Eigen::MatrixXd::Constant(1, 1, 0.3)), 0.1, 200, 6);
  const auto a = estimate_son(s2, 2, CovarianceStructure::DiagonalC);
  const auto b = estimate_so2(s2);
  EXPECT_EQ(a.g_hat, b.g_hat);
  EXPECT_EQ(*a.sigma2_hat, *b.sigma2_hat);
  const auto s3 = sample_brownian_set(BrownianDistParams(Eigen::MatrixXd::Identity(3, 3), kCdiag), 0.1, 200, 7);
  EXPECT_EQ(estimate_son(s3, 3, CovarianceStructure::FullZOnly).Z_hat, estimate_so3(s3).Z_hat);
}

TEST(EstimateSon, FullCIsUnsupportedForNAboveThree) {
  EXPECT_EQ(brownian_parameter_count(2), 2u);
  EXPECT_EQ(brownian_parameter_count(3), 9u);
  EXPECT_EQ(brownian_parameter_count(4), 27u);
  try {
    estimate_son({Eigen::MatrixXd::Identity(4, 4)}, 4, CovarianceStructure::FullC);
    FAIL() << "expected UnsupportedError";
  } catch (const UnsupportedError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("27"), std::string::npos) << msg;
    EXPECT_NE(msg.find("16"), std::string::npos) << msg;
  }
}

TEST(EstimateSon, DiagonalCExactOnConstructedMean) {
  // The mean exp(Z(0.1 I)) recovers 0.1 I exactly.
  const auto b = so_basis(4);
  const Eigen::MatrixXd c = 0.1 * Eigen::MatrixXd::Identity(6, 6);
  const auto r = estimate_son({matrix_exp(generator_Z(c, b))}, 4, CovarianceStructure::DiagonalC);
  EXPECT_LE((*r.C_hat - c).norm(), 1e-12);
  EXPECT_LE(r.residual, 1e-12);
  const auto z_only = estimate_son({matrix_exp(generator_Z(c, b))}, 4, CovarianceStructure::FullZOnly);
  EXPECT_FALSE(z_only.C_hat.has_value());
}

TEST(EstimateSon, FourDimensionalIsotropicMonteCarlo) {
  const auto samples = sample_brownian_set(BrownianDistParams(Eigen::MatrixXd::Identity(4, 4), 0.1 * Eigen::MatrixXd::Identity(6, 6)), 0.05, 10'000, 8);
  const auto r = estimate_son(samples, 4, CovarianceStructure::DiagonalC);
  EXPECT_LE((r.C_hat->diagonal().array() - 0.1).abs().maxCoeff(), 0.03) << r.C_hat->diagonal().transpose();
}

TEST(AdjointRep, IdentityAndRotationAboutE3) {
  const auto f = adjoint_rep(so_basis(3));
  EXPECT_LE((f(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-15);
  // A_1 generates rotations about e3; conjugation rotates the (A_2, A_3) plane.
  for (int trial = 0; trial < 20; ++trial) {
    const double th = 3.0 * testutil::normal();
    Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(3, 3);
    expect(1, 1) = std::cos(th);
    expect(2, 2) = std::cos(th);
    expect(1, 2) = -std::sin(th);
    expect(2, 1) = std::sin(th);
    EXPECT_LE((f(rot_axis(2, th)) - expect).norm(), 1e-14);
  }
}

TEST(AdjointRep, HomomorphismIntoOrthogonalMatrices) {
  for (int n : {3, 4}) {
    const auto f = adjoint_rep(so_basis(n));
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd g = testutil::random_rotation(n);
      const Eigen::MatrixXd h = testutil::random_rotation(n);
      EXPECT_LE((f(g * h) - f(g) * f(h)).norm(), 1e-12);
      const Eigen::MatrixXd fg = f(g);
      EXPECT_LE((fg.transpose() * fg - Eigen::MatrixXd::Identity(fg.rows(), fg.cols())).norm(), 1e-12);
    }
  }
}

TEST(AdjointRep, DerivativesMatchFiniteDifferences) {
  const auto b = so_basis(4);
  const auto f = adjoint_rep(b);
  const auto a = adjoint_derivatives(b);
  const double t = 1e-5;
  for (int k = 0; k < b.dim(); ++k) {
    const Eigen::MatrixXd fd = (f(matrix_exp(t * b.matrices[k])) - f(matrix_exp(-t * b.matrices[k]))) / (2 * t);
    EXPECT_LE((fd - a[static_cast<std::size_t>(k)]).norm(), 1e-9);
    EXPECT_LE((a[static_cast<std::size_t>(k)] + a[static_cast<std::size_t>(k)].transpose()).norm(), 1e-15);
  }
}

TEST(EstimateViaRepresentation, IdentityRepresentationMatchesSo3) {
  const auto samples = sample_brownian_set(BrownianDistParams(testutil::random_rotation(3), kCdiag), 0.1, 500, 9);
  const auto r = estimate_via_representation(samples, [](const Eigen::MatrixXd& g) { return g; });
  const auto s = estimate_so3(samples);
  EXPECT_EQ(r.f_g_hat, s.g_hat);
  EXPECT_EQ(r.Z_f_hat, s.Z_hat);
  EXPECT_EQ(r.m, 500u);
}

TEST(EstimateViaRepresentation, ZeroCovariance) {
  const Eigen::MatrixXd g = testutil::random_rotation(3);
  const auto f = adjoint_rep(so_basis(3));
  const auto r = estimate_via_representation(std::vector<Eigen::MatrixXd>(4, g), f);
  EXPECT_LE((r.f_g_hat - f(g)).norm(), 1e-13);
  EXPECT_LE(r.Z_f_hat.norm(), 1e-13);
}

TEST(EstimateViaRepresentation, AdjointMonteCarlo) {
  const auto b = so_basis(3);
  const Eigen::MatrixXd g = testutil::random_rotation(3);
  const auto samples = sample_brownian_set(BrownianDistParams(g, kCdiag), 0.01, 20'000, 10);
  const auto f = adjoint_rep(b);
  const auto r = estimate_via_representation(samples, f);
  const Eigen::MatrixXd zf = generator_Z(kCdiag, adjoint_derivatives(b));
  EXPECT_LE((r.Z_f_hat - zf).cwiseAbs().maxCoeff(), 0.03) << r.Z_f_hat << "\n" << zf;
  EXPECT_LE((r.f_g_hat - f(g)).norm(), 0.05);
}
