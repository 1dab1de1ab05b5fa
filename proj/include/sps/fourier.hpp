#pragma once

#include "sps/angular.hpp"
#include "sps/parity.hpp"
#include "sps/spin.hpp"

namespace sps {

/// Transformation matrix K_ell = sum_nu [M~_s]_{nu, nu+ell} |U_nu><U_{nu+ell}|.
struct KMatrix {
  SpinDimension dim;
  double s;
  int ell;
  ComplexMatrix matrix;
};

/// Fourier coefficients F_{ell m}, ell, m in {-2J, ..., 2J}, of
///   F(theta, phi) = sum_{ell m} F_{ell m} exp(i ell theta) exp(i m phi).
///
/// ell (the theta frequency) indexes rows, m (the phi frequency) columns, both
/// in ascending signed order.
class FourierTable {
 public:
  FourierTable(SpinDimension dim, double s)
      : dim_(dim), s_(s), coeffs_(ComplexMatrix::Zero(2 * dim.two_j() + 1, 2 * dim.two_j() + 1)) {}

  SpinDimension dim() const { return dim_; }
  double s() const { return s_; }
  /// Largest frequency, 2J.
  int band_limit() const { return dim_.two_j(); }

  Complex& operator()(int ell, int m) { return coeffs_(ell + band_limit(), m + band_limit()); }
  Complex operator()(int ell, int m) const { return coeffs_(ell + band_limit(), m + band_limit()); }

  const ComplexMatrix& coefficients() const { return coeffs_; }
  ComplexMatrix& coefficients() { return coeffs_; }

 private:
  SpinDimension dim_;
  double s_;
  ComplexMatrix coeffs_;
};

/// Builds K_ell from the J_y eigenvectors and the transformed parity operator.
///
/// The sum runs over nu with both nu and nu + ell in {-J, ..., J}; for
/// |ell| > 2J it is empty and the zero matrix is returned. O(d^3).
KMatrix compute_k(const EigenBasis& basis, const TransformedParity& mtilde, int ell);

/// Accumulates row ell of a Fourier table from K_ell:
///   F_{ell m} = sum_i rho[i][i+m] K_ell[i][i+m]
/// over array indices i of the descending basis with 0 <= i + m < d.
/// Sums longer than 256 terms use pairwise summation.
void accumulate_fourier_row(const ComplexMatrix& rho, const ComplexMatrix& k_ell, int ell, FourierTable& table);

struct MethodCOptions {
  /// Worker threads for the loop over ell (rows are disjoint, so no locking).
  unsigned threads = 1;
};

/// Method C: K_ell built on the fly and discarded for every ell. O(d^4) time, O(d^2) memory.
FourierTable fourier_coefficients_method_c(const ComplexMatrix& rho, const ParityOperator& parity,
                                           const EigenBasis& basis, const MethodCOptions& options = {});

/// Convenience overload that builds the J_y eigenbasis and M_s itself.
FourierTable fourier_coefficients_method_c(const ComplexMatrix& rho, double s, bool allow_extended_s = false);

enum class AngleVariable { theta, phi };

/// Coefficients of dF/dtheta (i ell F_{ell m}) or dF/dphi (i m F_{ell m}).
FourierTable derivative_coefficients(const FourierTable& table, AngleVariable variable);

}  // namespace sps
