#pragma once

#include <vector>

#include "sps/angular.hpp"
#include "sps/spin.hpp"

namespace sps {

/// Sphere radius R = sqrt(J / (2 pi)).
double spherical_radius(SpinDimension dim);

/// log gamma_j with gamma_j = R sqrt(4 pi) (2J)! [(2J+j+1)! (2J-j)!]^{-1/2}.
double log_gamma_j(SpinDimension dim, int j);

/// gamma_j evaluated through log_gamma_j. Throws DomainError for j outside 0..2J
/// and NonFiniteError where gamma_j drops below the normal double range
/// (2J beyond roughly 1000); log_gamma_j stays finite there.
double gamma_j(SpinDimension dim, int j);

/// Validates s in [-1, 1] unless allow_extended_s; throws DomainError otherwise.
void validate_s(double s, bool allow_extended_s);

/// gamma_j^{-s} for j = 0..2J. Throws NonFiniteError on overflow.
std::vector<double> gamma_powers(SpinDimension dim, double s, bool allow_extended_s = false);

/// Diagonal parity operator M_s (s = 0 Wigner, -1 Husimi Q, +1 Glauber P).
struct ParityOperator {
  SpinDimension dim;
  double s;
  RealVector diag;  ///< [M_s]_{ii} in the descending z basis
  double radius;
};

/// M_s = (1/R) sum_j sqrt((2j+1)/(4 pi)) gamma_j^{-s} T_j0, stored as its diagonal.
///
/// Throws DomainError for s outside [-1, 1] without allow_extended_s and
/// NonFiniteError when gamma_j^{-s} or an entry leaves the double range
/// (s near 1 at large d).
ParityOperator build_parity(SpinDimension dim, double s, bool allow_extended_s = false);

/// M_s in the J_y eigenbasis: U^dagger M_s U.
struct TransformedParity {
  SpinDimension dim;
  double s;
  ComplexMatrix matrix;
};

TransformedParity transform_parity(const ParityOperator& p, const EigenBasis& basis);

}  // namespace sps
