#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sps {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two operands disagree on the spin dimension d.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A computed quantity overflowed the double range.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Spin quantum number J stored as 2J, with d = 2J + 1.
///
/// Array index i in {0, ..., d-1} corresponds to the magnetic quantum number
/// m = J - i, so index 0 is |J, J> (spin up, |0...0> for 2J qubits).
class SpinDimension {
 public:
  /// Throws DomainError unless two_j >= 1.
  static SpinDimension from_two_j(int two_j) {
    if (two_j < 1) {
      throw DomainError("spin dimension requires J >= 1/2 (got 2J = " + std::to_string(two_j) + ")");
    }
    return SpinDimension(two_j);
  }

  /// Throws DomainError unless d >= 2.
  static SpinDimension from_dim(int d) {
    if (d < 2) {
      throw DomainError("spin dimension requires d >= 2 (got d = " + std::to_string(d) + ")");
    }
    return SpinDimension(d - 1);
  }

  int two_j() const { return two_j_; }
  int dim() const { return two_j_ + 1; }
  double j() const { return 0.5 * two_j_; }

  /// Magnetic quantum number of array index i.
  double m_of_index(int i) const { return j() - i; }
  /// 2m of array index i.
  int two_m_of_index(int i) const { return two_j_ - 2 * i; }
  /// Array index of the state with magnetic quantum number 2m / 2.
  int index_of_two_m(int two_m) const { return (two_j_ - two_m) / 2; }

  /// True when two_m is a valid 2m for this spin.
  bool contains_two_m(int two_m) const {
    return two_m >= -two_j_ && two_m <= two_j_ && ((two_j_ - two_m) % 2 == 0);
  }

  friend bool operator==(SpinDimension, SpinDimension) = default;

 private:
  explicit SpinDimension(int two_j) : two_j_(two_j) {}
  int two_j_;
};

inline void require_square(const ComplexMatrix& a, SpinDimension dim, const char* what) {
  if (a.rows() != dim.dim() || a.cols() != dim.dim()) {
    throw DimensionMismatch(std::string(what) + ": expected a " + std::to_string(dim.dim()) + "x" +
                            std::to_string(dim.dim()) + " matrix, got " + std::to_string(a.rows()) +
                            "x" + std::to_string(a.cols()));
  }
}

/// Spin dimension implied by a square matrix.
inline SpinDimension dimension_of(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("matrix is not square");
  }
  return SpinDimension::from_dim(static_cast<int>(a.rows()));
}

/// Checks the density-matrix tag invariants: Hermitian and unit trace to `tol`.
/// Positivity is not checked.
inline bool is_density_matrix(const ComplexMatrix& rho, double tol = 1e-12) {
  if (rho.rows() != rho.cols()) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(rho.trace() - Complex(1.0, 0.0)) <= tol;
}

}  // namespace sps
