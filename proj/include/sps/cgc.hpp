#pragma once

#include <vector>

#include "sps/spin.hpp"

namespace sps {

/// Quantum numbers of C^{j m}_{j1 m1, j2 m2}, each stored doubled.
struct CgcQuery {
  int two_j1, two_m1;
  int two_j2, two_m2;
  int two_j, two_m;
};

/// Wigner 3j symbols (j1 j2 j3; m1 m2 m3) for every admissible j1 at fixed
/// (j2, j3, m2, m3), with m1 = -m2 - m3.
///
/// Schulten-Gordon three-term recursion in j1: forward from the lower end
/// through the lower classically forbidden region, backward from the upper
/// end, matched over three points and normalized by sum (2j1+1) f^2 = 1 with
/// the Condon-Shortley sign at the upper end.
struct ThreeJSweep {
  int two_j1_min = 0;  ///< 2 * smallest admissible j1
  std::vector<double> values;  ///< values[k] belongs to j1 = j1_min + k

  bool empty() const { return values.empty(); }
  int two_j1_max() const { return two_j1_min + 2 * (static_cast<int>(values.size()) - 1); }
  /// Value at j1 = two_j1 / 2, or 0 outside the admissible range.
  double at(int two_j1) const;
};

ThreeJSweep wigner3j_sweep(int two_j2, int two_j3, int two_m2, int two_m3);

/// Clebsch-Gordan coefficient, Condon-Shortley convention, via one recursive
/// sweep over the coupled angular momentum.
///
/// Returns exactly 0 when m != m1 + m2 or j violates the triangle rule.
/// Throws DomainError for |m| > j, negative j, or an inconsistent mix of
/// integer and half-integer values.
double clebsch_gordan(const CgcQuery& q);

/// Irreducible tensor operator T_jm of a spin-J system:
/// [T_jm]_{m1 m2} = sqrt((2j+1)/(2J+1)) C^{J m1}_{J m2, j m}.
ComplexMatrix tensor_operator(SpinDimension dim, int j, int m);

/// Ragged table of c_jm for j = 0..2J, m = -j..j (m ascending within a row).
class CoefficientTable {
 public:
  explicit CoefficientTable(SpinDimension dim)
      : dim_(dim), c_(static_cast<std::size_t>(dim.dim()) * dim.dim(), Complex(0.0, 0.0)) {}

  SpinDimension dim() const { return dim_; }
  int max_rank() const { return dim_.two_j(); }

  Complex& operator()(int j, int m) { return c_[offset(j, m)]; }
  Complex operator()(int j, int m) const { return c_[offset(j, m)]; }

 private:
  static std::size_t offset(int j, int m) { return static_cast<std::size_t>(j * j + (m + j)); }
  SpinDimension dim_;
  std::vector<Complex> c_;
};

/// c_jm = Tr(rho T_jm^dagger) by the banded sum over the m-th diagonal of rho.
///
/// Each tensor-operator entry is an independent clebsch_gordan call, so the
/// cost is O(d^3) recursive coefficient evaluations.
CoefficientTable expansion_coefficients(const ComplexMatrix& rho);

/// Y_jm(theta, phi) with the Condon-Shortley phase, unit-normalized on the sphere.
Complex spherical_harmonic(int j, int m, double theta, double phi);

/// All Y_jm for j <= max_rank at one point, laid out like CoefficientTable.
std::vector<Complex> spherical_harmonics_upto(int max_rank, double theta, double phi);

/// Tensor-operator expansion (1/R) sum_jm gamma_j^{-s} c_jm Y_jm(theta, phi).
///
/// The overload taking rho recomputes the coefficient table; reuse a table
/// for many points.
Complex method_b_eval(const CoefficientTable& c, double s, double theta, double phi,
                      bool allow_extended_s = false);
Complex method_b_eval(const ComplexMatrix& rho, double s, double theta, double phi,
                      bool allow_extended_s = false);

}  // namespace sps
