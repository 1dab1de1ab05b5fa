#pragma once

#include "sps/spin.hpp"

namespace sps {

enum class Axis { x, y, z };

/// Angular momentum matrix J_x, J_y or J_z in the descending z basis.
ComplexMatrix build_spin_operator(SpinDimension dim, Axis axis);

/// Eigenvalues and eigenvectors of a spin component.
///
/// Column nu of `vectors` is the eigenvector with eigenvalue -J + nu, so the
/// eigenvalues ascend. Each column has its largest-magnitude entry real and
/// positive.
struct EigenBasis {
  SpinDimension dim;
  RealVector eigenvalues;
  ComplexMatrix vectors;

  /// Column index of eigenvalue m = two_m / 2.
  int column_of_two_m(int two_m) const { return (two_m + dim.two_j()) / 2; }
};

/// Diagonalizes a Hermitian tridiagonal matrix (J_x or J_y).
///
/// A diagonal unitary phase similarity maps the input onto a real symmetric
/// tridiagonal matrix, which is diagonalized and mapped back. Throws
/// DomainError for non-Hermitian or non-tridiagonal input.
EigenBasis eigendecompose(const ComplexMatrix& op);

/// Eigenbasis of J_y, the one used by every phase-space routine.
EigenBasis jy_eigenbasis(SpinDimension dim);

/// Rank-one projector A_m = |U_m><U_m| for eigenvalue m = two_m / 2.
ComplexMatrix projector_am(const EigenBasis& basis, int two_m);

/// [A_m]_{m1 m2} from the closed-form double sum (log-domain factorials).
///
/// Suffers cancellation at large J, so it is a cross-check for small d only;
/// throws DomainError when d > max_dim or a quantum number is out of range.
Complex am_analytic(SpinDimension dim, int two_m, int two_m1, int two_m2, int max_dim = 32);

/// exp(i theta J_y) = sum_m exp(i theta m) A_m.
ComplexMatrix wigner_d(const EigenBasis& basis, double theta);
ComplexMatrix wigner_d(SpinDimension dim, double theta);

/// Euler rotation exp(i phi J_z) exp(i theta J_y).
ComplexMatrix rotation_operator(const EigenBasis& basis, double theta, double phi);
ComplexMatrix rotation_operator(SpinDimension dim, double theta, double phi);

/// Rotation whose action on |J,J> points along the sphere direction
/// (theta, phi): exp(-i phi J_z) exp(-i theta J_y). Phase-space functions are
/// defined through this operator.
ComplexMatrix phase_space_rotation(const EigenBasis& basis, double theta, double phi);
ComplexMatrix phase_space_rotation(SpinDimension dim, double theta, double phi);

}  // namespace sps
