#include "sps/parity.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "sps/cgc.hpp"

namespace sps {

double spherical_radius(SpinDimension dim) { return std::sqrt(dim.j() / (2.0 * std::numbers::pi)); }

double log_gamma_j(SpinDimension dim, int j) {
  const int two_j = dim.two_j();
  if (j < 0 || j > two_j) {
    throw DomainError("gamma_j: rank j = " + std::to_string(j) + " outside 0.." + std::to_string(two_j));
  }
  return std::log(spherical_radius(dim)) + 0.5 * std::log(4.0 * std::numbers::pi) + std::lgamma(two_j + 1.0) -
         0.5 * std::lgamma(two_j + j + 2.0) - 0.5 * std::lgamma(two_j - j + 1.0);
}

double gamma_j(SpinDimension dim, int j) {
  const double g = std::exp(log_gamma_j(dim, j));
  if (!(g >= std::numeric_limits<double>::min())) {
    throw NonFiniteError("gamma_j underflows at j = " + std::to_string(j) + " (d = " + std::to_string(dim.dim()) +
                         "); use log_gamma_j");
  }
  return g;
}

void validate_s(double s, bool allow_extended_s) {
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  if (!allow_extended_s && (s < -1.0 || s > 1.0)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", s);
    throw DomainError("s = " + std::string(buf) + " outside [-1, 1]; the extended range must be enabled explicitly");
  }
}

std::vector<double> gamma_powers(SpinDimension dim, double s, bool allow_extended_s) {
  validate_s(s, allow_extended_s);
  std::vector<double> out(static_cast<std::size_t>(dim.two_j() + 1));
  for (int j = 0; j <= dim.two_j(); ++j) {
    const double w = std::exp(-s * log_gamma_j(dim, j));
    if (!std::isfinite(w) || w == 0.0) {
      throw NonFiniteError("gamma_j^{-s} leaves the double range at j = " + std::to_string(j) +
                           " (d = " + std::to_string(dim.dim()) + ", s = " + std::to_string(s) +
                           "); use s <= 0 at this dimension");
    }
    out[static_cast<std::size_t>(j)] = w;
  }
  return out;
}

ParityOperator build_parity(SpinDimension dim, double s, bool allow_extended_s) {
  const std::vector<double> weights = gamma_powers(dim, s, allow_extended_s);
  const int d = dim.dim();
  const int two_j = dim.two_j();
  const double radius = spherical_radius(dim);
  RealVector diag = RealVector::Zero(d);

  for (int i = 0; i < d; ++i) {
    const int two_m = dim.two_m_of_index(i);
    // [T_j0]_{mm} = (-1)^{J-m} C^{j0}_{Jm,J-m} = (-1)^{J-m} sqrt(2j+1) (j J J; 0 m -m).
    const ThreeJSweep sweep = wigner3j_sweep(two_j, two_j, two_m, -two_m);
    const double phase = (((two_j - two_m) / 2) % 2 == 0) ? 1.0 : -1.0;
    double acc = 0.0;
    for (int j = 0; j <= two_j; ++j) {
      const double t_j0 = phase * std::sqrt(2.0 * j + 1.0) * sweep.at(2 * j);
      acc += std::sqrt((2.0 * j + 1.0) / (4.0 * std::numbers::pi)) * weights[static_cast<std::size_t>(j)] * t_j0;
    }
    diag(i) = acc / radius;
    if (!std::isfinite(diag(i))) {
      throw NonFiniteError("parity operator entry " + std::to_string(i) + " is not finite (d = " +
                           std::to_string(d) + ", s = " + std::to_string(s) + ")");
    }
  }
  return ParityOperator{dim, s, std::move(diag), radius};
}

TransformedParity transform_parity(const ParityOperator& p, const EigenBasis& basis) {
  if (!(p.dim == basis.dim)) {
    throw DimensionMismatch("transform_parity: parity d = " + std::to_string(p.dim.dim()) + ", basis d = " +
                            std::to_string(basis.dim.dim()));
  }
  ComplexMatrix m = basis.vectors.adjoint() * p.diag.cast<Complex>().asDiagonal() * basis.vectors;
  return TransformedParity{p.dim, p.s, std::move(m)};
}

}  // namespace sps
