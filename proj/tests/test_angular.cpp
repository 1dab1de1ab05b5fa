#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sps/angular.hpp"
#include "test_util.hpp"

using namespace sps;
using testutil::kPi;
using testutil::max_abs;

namespace {
const Complex I(0.0, 1.0);
}

TEST(SpinDimension, RejectsBadSizes) {
  EXPECT_THROW(SpinDimension::from_dim(1), DomainError);
  EXPECT_THROW(SpinDimension::from_two_j(0), DomainError);
  const auto dim = SpinDimension::from_dim(4);
  EXPECT_EQ(dim.two_j(), 3);
  EXPECT_EQ(dim.two_m_of_index(0), 3);
  EXPECT_EQ(dim.two_m_of_index(3), -3);
  EXPECT_EQ(dim.index_of_two_m(-1), 2);
}

TEST(SpinOperators, SpinHalf) {
  const auto dim = SpinDimension::from_dim(2);
  const ComplexMatrix z = build_spin_operator(dim, Axis::z);
  const ComplexMatrix y = build_spin_operator(dim, Axis::y);
  ComplexMatrix ez(2, 2), ey(2, 2);
  ez << 0.5, 0, 0, -0.5;
  ey << 0, -0.5 * I, 0.5 * I, 0;
  EXPECT_LT(max_abs(z - ez), 1e-15);
  EXPECT_LT(max_abs(y - ey), 1e-15);
}

TEST(SpinOperators, CommutationRelations) {
  for (int d : {2, 3, 6, 11}) {
    const auto dim = SpinDimension::from_dim(d);
    const ComplexMatrix x = build_spin_operator(dim, Axis::x);
    const ComplexMatrix y = build_spin_operator(dim, Axis::y);
    const ComplexMatrix z = build_spin_operator(dim, Axis::z);
    const double scale = d * d;
    EXPECT_LT(max_abs(x * y - y * x - I * z), 1e-15 * scale) << d;
    EXPECT_LT(max_abs(y * z - z * y - I * x), 1e-15 * scale) << d;
    EXPECT_LT(max_abs(z * x - x * z - I * y), 1e-15 * scale) << d;
    EXPECT_LT(max_abs(z - oracle::jz(d)), 1e-15);
  }
}

TEST(Eigendecompose, SpectrumAndResidual) {
  for (int d : {2, 3, 11, 40}) {
    const auto dim = SpinDimension::from_dim(d);
    const EigenBasis b = jy_eigenbasis(dim);
    const ComplexMatrix jy = build_spin_operator(dim, Axis::y);
    for (int nu = 0; nu < d; ++nu) EXPECT_NEAR(b.eigenvalues(nu), -dim.j() + nu, 1e-12);
    const ComplexMatrix resid = jy * b.vectors - b.vectors * b.eigenvalues.cast<Complex>().asDiagonal();
    EXPECT_LT(max_abs(resid), 1e-12) << d;
    EXPECT_LT(max_abs(b.vectors.adjoint() * b.vectors - ComplexMatrix::Identity(d, d)), 1e-12) << d;
  }
}

TEST(Eigendecompose, PhaseConventionLargestEntryRealPositive) {
  const EigenBasis b = jy_eigenbasis(SpinDimension::from_dim(9));
  for (int nu = 0; nu < 9; ++nu) {
    Eigen::Index imax;
    b.vectors.col(nu).cwiseAbs().maxCoeff(&imax);
    EXPECT_GT(b.vectors(imax, nu).real(), 0.0);
    EXPECT_EQ(b.vectors(imax, nu).imag(), 0.0);
  }
}

TEST(Eigendecompose, JxWorksToo) {
  const auto dim = SpinDimension::from_dim(7);
  const ComplexMatrix jx = build_spin_operator(dim, Axis::x);
  const EigenBasis b = eigendecompose(jx);
  EXPECT_LT(max_abs(jx * b.vectors - b.vectors * b.eigenvalues.cast<Complex>().asDiagonal()), 1e-12);
}

TEST(Eigendecompose, RejectsNonHermitian) {
  ComplexMatrix a = build_spin_operator(SpinDimension::from_dim(3), Axis::y);
  a(0, 1) += 0.1;
  EXPECT_THROW(eigendecompose(a), DomainError);
  ComplexMatrix dense = ComplexMatrix::Ones(3, 3);
  EXPECT_THROW(eigendecompose(dense), DomainError);
}

TEST(Projector, SpinHalfByHand) {
  // sigma_y / 2 eigenvector for +1/2 is (1, i)/sqrt 2.
  const EigenBasis b = jy_eigenbasis(SpinDimension::from_dim(2));
  ComplexMatrix expect(2, 2);
  expect << 0.5, -0.5 * I, 0.5 * I, 0.5;
  EXPECT_LT(max_abs(projector_am(b, 1) - expect), 1e-15);
}

TEST(Projector, RankOneCompleteBounded) {
  for (int d : {2, 5, 16, 33}) {
    const auto dim = SpinDimension::from_dim(d);
    const EigenBasis b = jy_eigenbasis(dim);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int tm = -dim.two_j(); tm <= dim.two_j(); tm += 2) {
      const ComplexMatrix a = projector_am(b, tm);
      EXPECT_NEAR(a.trace().real(), 1.0, 1e-12);
      EXPECT_LT(max_abs(a * a - a), 1e-12);
      EXPECT_LE(max_abs(a), 1.0 + 1e-15);
      sum += a;
    }
    EXPECT_LT(max_abs(sum - ComplexMatrix::Identity(d, d)), 1e-12) << d;
  }
  EXPECT_THROW(projector_am(jy_eigenbasis(SpinDimension::from_dim(3)), 4), DomainError);
  EXPECT_THROW(projector_am(jy_eigenbasis(SpinDimension::from_dim(3)), 1), DomainError);
}

TEST(Projector, MatchesGenericSolverProjectors) {
  for (int d : {3, 8, 17}) {
    const auto dim = SpinDimension::from_dim(d);
    const EigenBasis b = jy_eigenbasis(dim);
    const auto ref = oracle::jy_projectors(d);
    for (int nu = 0; nu < d; ++nu) {
      EXPECT_LT(max_abs(projector_am(b, 2 * nu - dim.two_j()) - ref[nu]), 1e-12) << d << ' ' << nu;
    }
  }
}

TEST(Projector, GaugeInvariance) {
  const auto dim = SpinDimension::from_dim(10);
  const EigenBasis b = jy_eigenbasis(dim);
  EigenBasis rephased = b;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int nu = 0; nu < 10; ++nu) rephased.vectors.col(nu) *= std::polar(1.0, u(rng));
  for (int tm = -9; tm <= 9; tm += 2) {
    EXPECT_LT(max_abs(projector_am(b, tm) - projector_am(rephased, tm)), 1e-15);
  }
}

TEST(AmAnalytic, SpinHalfEntry) {
  EXPECT_NEAR(std::abs(am_analytic(SpinDimension::from_dim(2), 1, 1, 1) - 0.5), 0.0, 1e-15);
}

TEST(AmAnalytic, AgreesWithProjectorUpTo16) {
  for (int d = 2; d <= 16; ++d) {
    const auto dim = SpinDimension::from_dim(d);
    const EigenBasis b = jy_eigenbasis(dim);
    double worst = 0.0;
    for (int tm = -dim.two_j(); tm <= dim.two_j(); tm += 2) {
      const ComplexMatrix a = projector_am(b, tm);
      for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
          const Complex v = am_analytic(dim, tm, dim.two_m_of_index(i), dim.two_m_of_index(k));
          worst = std::max(worst, std::abs(v - a(i, k)));
        }
      }
    }
    EXPECT_LT(worst, 1e-10) << "d=" << d;
  }
}

TEST(AmAnalytic, CompletenessAndLimits) {
  const auto dim = SpinDimension::from_dim(6);
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 6; ++k) {
      Complex sum = 0.0;
      for (int tm = -5; tm <= 5; tm += 2) sum += am_analytic(dim, tm, dim.two_m_of_index(i), dim.two_m_of_index(k));
      EXPECT_LT(std::abs(sum - (i == k ? 1.0 : 0.0)), 1e-13);
    }
  }
  EXPECT_THROW(am_analytic(SpinDimension::from_dim(40), 1, 1, 1), DomainError);
  EXPECT_THROW(am_analytic(dim, 7, 1, 1), DomainError);
}

TEST(WignerD, IdentityAndSpinorPhase) {
  for (int d : {2, 3, 8, 9}) {
    const auto dim = SpinDimension::from_dim(d);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    EXPECT_LT(max_abs(wigner_d(dim, 0.0) - id), 1e-12);
    const double sign = (dim.two_j() % 2 == 0) ? 1.0 : -1.0;
    EXPECT_LT(max_abs(wigner_d(dim, 2 * kPi) - sign * id), 1e-12) << d;
  }
}

TEST(WignerD, MatchesMatrixExponential) {
  for (int d : {2, 3, 7}) {
    const auto dim = SpinDimension::from_dim(d);
    const ComplexMatrix jy = build_spin_operator(dim, Axis::y);
    for (double theta : {kPi / 3, 1.234, -2.5}) {
      EXPECT_LT(max_abs(wigner_d(dim, theta) - oracle::expm(I * theta * jy)), 1e-12) << d << ' ' << theta;
    }
  }
}

TEST(WignerD, GroupLawAndUnitarity) {
  const EigenBasis b = jy_eigenbasis(SpinDimension::from_dim(21));
  const ComplexMatrix a = wigner_d(b, 0.7), c = wigner_d(b, -1.9);
  EXPECT_LT(max_abs(a * c - wigner_d(b, 0.7 - 1.9)), 1e-11);
  EXPECT_LT(max_abs(a.adjoint() * a - ComplexMatrix::Identity(21, 21)), 1e-12);
}

TEST(Rotation, MatchesExponentialProduct) {
  for (int d : {2, 3, 5}) {
    const auto dim = SpinDimension::from_dim(d);
    const ComplexMatrix jy = build_spin_operator(dim, Axis::y);
    const ComplexMatrix jz = build_spin_operator(dim, Axis::z);
    const double th = 0.83, ph = -2.1;
    const ComplexMatrix ref = oracle::expm(I * ph * jz) * oracle::expm(I * th * jy);
    EXPECT_LT(max_abs(rotation_operator(dim, th, ph) - ref), 1e-12);
    EXPECT_LT(max_abs(rotation_operator(dim, 0, 0) - ComplexMatrix::Identity(d, d)), 1e-12);
    const ComplexMatrix ps = oracle::expm(-I * ph * jz) * oracle::expm(-I * th * jy);
    EXPECT_LT(max_abs(phase_space_rotation(dim, th, ph) - ps), 1e-12);
  }
}

TEST(Rotation, PhaseSpaceRotationPointsSpinUpAlongDirection) {
  // <J> of R|J,J> is J (sin t cos p, sin t sin p, cos t).
  const auto dim = SpinDimension::from_dim(6);
  const double th = 1.1, ph = 2.3;
  const ComplexVector psi = phase_space_rotation(dim, th, ph).col(0);
  auto expect = [&](Axis a) { return (psi.adjoint() * build_spin_operator(dim, a) * psi)(0, 0).real(); };
  EXPECT_NEAR(expect(Axis::x), dim.j() * std::sin(th) * std::cos(ph), 1e-12);
  EXPECT_NEAR(expect(Axis::y), dim.j() * std::sin(th) * std::sin(ph), 1e-12);
  EXPECT_NEAR(expect(Axis::z), dim.j() * std::cos(th), 1e-12);
}
