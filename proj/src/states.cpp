#include "sps/states.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "sps/angular.hpp"

namespace sps {

namespace {

ComplexMatrix pure(const ComplexVector& psi) { return psi * psi.adjoint(); }

}  // namespace

ComplexMatrix ghz(SpinDimension dim) {
  ComplexVector psi = ComplexVector::Zero(dim.dim());
  psi(0) = psi(dim.dim() - 1) = 1.0 / std::sqrt(2.0);
  return pure(psi);
}

ComplexMatrix dicke(SpinDimension dim, int two_m) {
  if (!dim.contains_two_m(two_m)) throw DomainError("dicke: m out of range for this spin");
  ComplexMatrix rho = ComplexMatrix::Zero(dim.dim(), dim.dim());
  const int i = dim.index_of_two_m(two_m);
  rho(i, i) = 1.0;
  return rho;
}

ComplexMatrix squeezed(SpinDimension dim, double xi) {
  const EigenBasis bx = eigendecompose(build_spin_operator(dim, Axis::x));
  ComplexVector phases(dim.dim());
  for (int k = 0; k < dim.dim(); ++k) {
    const double nu = bx.eigenvalues(k);
    phases(k) = std::polar(1.0, -xi * nu * nu);
  }
  // U diag(e^{-i xi nu^2}) U^dagger e_0
  const ComplexVector coords = bx.vectors.row(0).adjoint();
  ComplexVector psi = bx.vectors * phases.cwiseProduct(coords);
  psi /= psi.norm();
  return pure(psi);
}

ComplexMatrix coherent(SpinDimension dim, double theta0, double phi0) {
  const ComplexVector psi = phase_space_rotation(dim, theta0, phi0).col(0);
  return pure(psi);
}

ComplexMatrix mixed(SpinDimension dim) {
  return ComplexMatrix::Identity(dim.dim(), dim.dim()) / static_cast<double>(dim.dim());
}

ComplexMatrix random_density(SpinDimension dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = dim.dim();
  ComplexMatrix g(d, d);
  // Fill in a fixed order so the result depends only on the seed.
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  ComplexMatrix h = g + g.adjoint();
  const double lambda_min = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
  h.diagonal().array() += 1.0 - lambda_min;
  h /= h.trace().real();
  // Exact Hermiticity after the arithmetic above.
  return 0.5 * (h + h.adjoint());
}

}  // namespace sps
