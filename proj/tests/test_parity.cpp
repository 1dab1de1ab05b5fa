#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "sps/angular.hpp"
#include "sps/cgc.hpp"
#include "sps/parity.hpp"
#include "test_util.hpp"

using namespace sps;
using testutil::kPi;
using testutil::max_abs;

TEST(Gamma, SpinHalfValues) {
  const auto half = SpinDimension::from_dim(2);
  EXPECT_NEAR(gamma_j(half, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(gamma_j(half, 1), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_THROW(gamma_j(half, 2), DomainError);
  EXPECT_THROW(gamma_j(half, -1), DomainError);
}

TEST(Gamma, LogDomainMatchesFactorials) {
  for (int d = 2; d <= 151; ++d) {
    const auto dim = SpinDimension::from_dim(d);
    for (int j = 0; j < d; ++j) {
      const double ref = oracle::gamma_direct(d, j);
      EXPECT_NEAR(gamma_j(dim, j) / ref, 1.0, 1e-12) << d << ' ' << j;
    }
  }
}

TEST(Gamma, StrictlyDecreasingAndFiniteAtLargeD) {
  const auto dim = SpinDimension::from_dim(4001);
  double prev = log_gamma_j(dim, 0);
  for (int j = 1; j <= dim.two_j(); ++j) {
    const double g = log_gamma_j(dim, j);
    ASSERT_TRUE(std::isfinite(g)) << j;
    ASSERT_LT(g, prev);
    prev = g;
  }
  // The linear value leaves the double range long before 2J = 4000.
  EXPECT_THROW(gamma_j(dim, dim.two_j()), NonFiniteError);
  const auto mid = SpinDimension::from_dim(501);
  for (int j = 1; j <= mid.two_j(); ++j) ASSERT_LT(gamma_j(mid, j), gamma_j(mid, j - 1));
  EXPECT_NEAR(spherical_radius(SpinDimension::from_dim(2)), std::sqrt(0.25 / kPi), 1e-16);
}

TEST(BuildParity, SpinHalfWigner) {
  const ParityOperator p = build_parity(SpinDimension::from_dim(2), 0.0);
  EXPECT_NEAR(p.diag(0), (1 + std::sqrt(3.0)) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(p.diag(1), (1 - std::sqrt(3.0)) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(p.diag(0), 1.9318517, 1e-7);
  EXPECT_NEAR(p.diag(1), -0.5176381, 1e-7);
}

TEST(BuildParity, MatchesRacahSum) {
  for (int d : {2, 3, 6, 11, 20}) {
    for (double s : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      const ParityOperator p = build_parity(SpinDimension::from_dim(d), s);
      const auto ref = oracle::parity_diag(d, s);
      for (int i = 0; i < d; ++i) EXPECT_NEAR(p.diag(i), ref[i], 1e-10 * std::max(1.0, std::abs(ref[i])));
    }
  }
}

TEST(BuildParity, HusimiIsSpinUpProjector) {
  // M_{-1} = |J,J><J,J|: a single unit entry at index 0.
  for (int d : {2, 5, 16, 64}) {
    const ParityOperator p = build_parity(SpinDimension::from_dim(d), -1.0);
    EXPECT_NEAR(p.diag(0), 1.0, 1e-10) << d;
    for (int i = 1; i < d; ++i) EXPECT_NEAR(p.diag(i), 0.0, 1e-10) << d;
  }
}

TEST(BuildParity, TraceIdentity) {
  for (int d : {2, 7, 30}) {
    const auto dim = SpinDimension::from_dim(d);
    for (double s : {-1.0, 0.0, 0.7}) {
      const ParityOperator p = build_parity(dim, s);
      const double expect = std::sqrt(double(d)) * std::pow(gamma_j(dim, 0), -s) /
                            (spherical_radius(dim) * std::sqrt(4 * kPi));
      EXPECT_NEAR(p.diag.sum(), expect, 1e-10 * expect);
    }
  }
}

TEST(BuildParity, SValidationAndOverflow) {
  const auto dim = SpinDimension::from_dim(5);
  EXPECT_THROW(build_parity(dim, 1.01), DomainError);
  EXPECT_THROW(build_parity(dim, -2.0), DomainError);
  EXPECT_NO_THROW(build_parity(dim, 2.0, true));
  EXPECT_THROW(build_parity(SpinDimension::from_dim(4001), 1.0), NonFiniteError);
}

TEST(BuildParity, OperatorLevelExpansionMatchesRotatedParity) {
  // (1/R) sum_jm gamma_j^{-s} T_jm^dagger Y_jm(theta, phi) = R M_s R^dagger.
  for (int d : {2, 4, 8}) {
    const auto dim = SpinDimension::from_dim(d);
    for (double s : {-1.0, 0.0, 0.4}) {
      const ParityOperator p = build_parity(dim, s);
      const double th = 1.2, ph = -0.7;
      ComplexMatrix lhs = ComplexMatrix::Zero(d, d);
      for (int j = 0; j < d; ++j) {
        for (int m = -j; m <= j; ++m) {
          lhs += std::pow(gamma_j(dim, j), -s) * spherical_harmonic(j, m, th, ph) *
                 tensor_operator(dim, j, m).adjoint();
        }
      }
      lhs /= spherical_radius(dim);
      const ComplexMatrix r = phase_space_rotation(dim, th, ph);
      const ComplexMatrix rhs = r * p.diag.cast<Complex>().asDiagonal() * r.adjoint();
      EXPECT_LT(max_abs(lhs - rhs), 1e-10) << d << ' ' << s;
    }
  }
}

TEST(TransformParity, IdentityHermitianSpectrum) {
  const auto dim = SpinDimension::from_dim(2);
  const EigenBasis b = jy_eigenbasis(dim);
  ParityOperator unit{dim, 0.0, RealVector::Ones(2), spherical_radius(dim)};
  EXPECT_LT(max_abs(transform_parity(unit, b).matrix - ComplexMatrix::Identity(2, 2)), 1e-15);

  for (int d : {2, 9, 25}) {
    const auto dd = SpinDimension::from_dim(d);
    const ParityOperator p = build_parity(dd, 0.0);
    const TransformedParity t = transform_parity(p, jy_eigenbasis(dd));
    EXPECT_LT(max_abs(t.matrix - t.matrix.adjoint()), 1e-13);
    RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(t.matrix).eigenvalues();
    RealVector ref = p.diag;
    std::sort(ref.data(), ref.data() + d);
    EXPECT_LT((ev - ref).cwiseAbs().maxCoeff(), 1e-10);
  }
  const ParityOperator p = build_parity(SpinDimension::from_dim(3), 0.0);
  EXPECT_THROW(transform_parity(p, jy_eigenbasis(SpinDimension::from_dim(4))), DimensionMismatch);
}
