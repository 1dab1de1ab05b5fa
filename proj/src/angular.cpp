#include "sps/angular.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace sps {

namespace {

constexpr double kHermitianTol = 1e-12;

// sqrt(J(J+1) - m(m+1)) for the raising step m -> m + 1, with 2m given.
double ladder_coefficient(int two_j, int two_m) {
  const double j = 0.5 * two_j;
  const double m = 0.5 * two_m;
  return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

void require_two_m(SpinDimension dim, int two_m, const char* what) {
  if (!dim.contains_two_m(two_m)) {
    throw DomainError(std::string(what) + ": magnetic quantum number 2m = " + std::to_string(two_m) +
                      " out of range for 2J = " + std::to_string(dim.two_j()));
  }
}

// Diagonal of exp(i phi J_z) in the descending basis.
ComplexVector jz_phases(SpinDimension dim, double phi) {
  ComplexVector out(dim.dim());
  for (int i = 0; i < dim.dim(); ++i) {
    out(i) = std::polar(1.0, phi * dim.m_of_index(i));
  }
  return out;
}

}  // namespace

ComplexMatrix build_spin_operator(SpinDimension dim, Axis axis) {
  const int d = dim.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  if (axis == Axis::z) {
    for (int i = 0; i < d; ++i) out(i, i) = dim.m_of_index(i);
    return out;
  }
  // <m+1| J_+ |m> sits at (i-1, i) in the descending basis.
  for (int i = 1; i < d; ++i) {
    const double a = ladder_coefficient(dim.two_j(), dim.two_m_of_index(i));
    if (axis == Axis::x) {
      out(i - 1, i) = 0.5 * a;
      out(i, i - 1) = 0.5 * a;
    } else {
      out(i - 1, i) = Complex(0.0, -0.5 * a);
      out(i, i - 1) = Complex(0.0, 0.5 * a);
    }
  }
  return out;
}

EigenBasis eigendecompose(const ComplexMatrix& op) {
  const SpinDimension dim = dimension_of(op);
  const int d = dim.dim();
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
    throw DomainError("eigendecompose: input is not Hermitian");
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (std::abs(r - c) > 1 && op(r, c) != Complex(0.0, 0.0)) {
        throw DomainError("eigendecompose: input is not tridiagonal");
      }
    }
  }

  // D^dagger op D is real symmetric tridiagonal when D_{k+1} = D_k * conj(phase of op(k, k+1)).
  ComplexVector phases(d);
  phases(0) = 1.0;
  RealVector diag(d);
  RealVector sub(std::max(d - 1, 1));
  for (int k = 0; k < d; ++k) diag(k) = op(k, k).real();
  for (int k = 0; k + 1 < d; ++k) {
    const Complex e = op(k, k + 1);
    const double a = std::abs(e);
    phases(k + 1) = a > 0.0 ? phases(k) * std::conj(e) / a : phases(k);
    sub(k) = a;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(d - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecompose: tridiagonal eigensolver did not converge");
  }

  ComplexMatrix vectors = phases.asDiagonal() * solver.eigenvectors().cast<Complex>();
  for (int col = 0; col < d; ++col) {
    Eigen::Index arg = 0;
    vectors.col(col).cwiseAbs().maxCoeff(&arg);
    const Complex pivot = vectors(arg, col);
    vectors.col(col) *= std::abs(pivot) / pivot;
    vectors(arg, col) = std::abs(pivot);
  }
  return EigenBasis{dim, solver.eigenvalues(), std::move(vectors)};
}

EigenBasis jy_eigenbasis(SpinDimension dim) { return eigendecompose(build_spin_operator(dim, Axis::y)); }

ComplexMatrix projector_am(const EigenBasis& basis, int two_m) {
  require_two_m(basis.dim, two_m, "projector_am");
  const auto u = basis.vectors.col(basis.column_of_two_m(two_m));
  return u * u.adjoint();
}

Complex am_analytic(SpinDimension dim, int two_m, int two_m1, int two_m2, int max_dim) {
  if (dim.dim() > max_dim) {
    throw DomainError("am_analytic: closed form is restricted to d <= " + std::to_string(max_dim));
  }
  require_two_m(dim, two_m, "am_analytic");
  require_two_m(dim, two_m1, "am_analytic");
  require_two_m(dim, two_m2, "am_analytic");

  // Integer offsets: J + m etc. are integers for every valid quantum number.
  const int two_j = dim.two_j();
  const int jp1 = (two_j + two_m1) / 2, jm1 = (two_j - two_m1) / 2;
  const int jp2 = (two_j + two_m2) / 2, jm2 = (two_j - two_m2) / 2;
  const int jpm = (two_j + two_m) / 2;
  const int diff = (two_m1 - two_m2) / 2;  // m1 - m2
  auto lf = [](int n) { return std::lgamma(n + 1.0); };
  auto log_binom = [&](int n, int k) { return lf(n) - lf(k) - lf(n - k); };

  const double log_norm = 0.5 * (lf(jp1) + lf(jm1) + lf(jp2) + lf(jm2));
  const int k_lo = std::max(0, -diff);
  const int k_hi = std::min(jm1, jp2);

  // Sum over k of w_k * I_m(J, lambda) with lambda = 2k + m1 - m2. The sign
  // (-1)^{l - lambda/2} of I_m is a quarter-turn phase, i^{2l - lambda}.
  Complex total = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const int lambda = 2 * k + diff;
    const double w_sign = ((k + diff) % 2 == 0) ? 1.0 : -1.0;
    const double log_w = log_norm - lf(jm1 - k) - lf(jp2 - k) - lf(k + diff) - lf(k);
    const int l_lo = std::max(0, lambda - (two_j - jpm));
    const int l_hi = std::min(lambda, jpm);
    Complex inner = 0.0;
    for (int l = l_lo; l <= l_hi; ++l) {
      const int quarter = ((2 * l - lambda) % 4 + 4) % 4;
      static constexpr Complex kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      inner += kPowI[quarter] *
               std::exp(log_binom(two_j - lambda, jpm - l) + log_binom(lambda, l) + log_w -
                        two_j * std::log(2.0));
    }
    total += w_sign * inner;
  }
  return total;
}

ComplexMatrix wigner_d(const EigenBasis& basis, double theta) {
  ComplexVector weights(basis.dim.dim());
  for (int nu = 0; nu < basis.dim.dim(); ++nu) {
    weights(nu) = std::polar(1.0, theta * (nu - basis.dim.j()));
  }
  return basis.vectors * weights.asDiagonal() * basis.vectors.adjoint();
}

ComplexMatrix wigner_d(SpinDimension dim, double theta) { return wigner_d(jy_eigenbasis(dim), theta); }

ComplexMatrix rotation_operator(const EigenBasis& basis, double theta, double phi) {
  return jz_phases(basis.dim, phi).asDiagonal() * wigner_d(basis, theta);
}

ComplexMatrix rotation_operator(SpinDimension dim, double theta, double phi) {
  return rotation_operator(jy_eigenbasis(dim), theta, phi);
}

ComplexMatrix phase_space_rotation(const EigenBasis& basis, double theta, double phi) {
  return rotation_operator(basis, -theta, -phi);
}

ComplexMatrix phase_space_rotation(SpinDimension dim, double theta, double phi) {
  return rotation_operator(jy_eigenbasis(dim), -theta, -phi);
}

}  // namespace sps
