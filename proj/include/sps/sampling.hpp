#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sps/fourier.hpp"
#include "sps/parity.hpp"
#include "sps/spin.hpp"

namespace sps {

/// Raised when a grid is too coarse to represent a band-limited function.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// How a grid (or stored matrix) was produced. Values are the on-disk tags.
enum class MethodTag : std::uint8_t {
  method_b = 'b',
  method_c = 'c',
  method_d = 'd',
  direct = 'x',
  matrix = 'm',
};

std::string to_string(MethodTag tag);

/// Samples F(theta_k, phi_l) on theta_k = pi k / n, phi_l = 2 pi l / n.
struct PhaseSpaceGrid {
  SpinDimension dim;
  double s;
  int n;
  MethodTag method;
  ComplexMatrix values;  ///< values(k, l)

  double theta(int k) const;
  double phi(int l) const;

  /// max |Im| / max |value|; small for Hermitian input.
  double imaginary_residue() const;

  /// Largest deviation along the theta = 0 row from its first entry. The
  /// north pole is one point, so exact data gives 0.
  double pole_spread() const;
};

/// Smallest admissible grid size, 4J + 2 (always even).
int minimal_grid_size(SpinDimension dim);

/// Default grid size: max(512, next power of two >= 4J + 2).
int default_grid_size(SpinDimension dim);

/// Throws ResolutionError unless n >= 4J + 2 and n is even.
void validate_grid_size(SpinDimension dim, int n);

/// Zero-padded inverse DFT of the coefficients on a 2n x n array covering
/// theta in [0, 2 pi): full(k, l) = F(pi k / n, 2 pi l / n), k < 2n.
ComplexMatrix sample_fft_full(const FourierTable& table, int n);

/// sample_fft_full with the redundant theta >= pi half discarded.
PhaseSpaceGrid sample_fft(const FourierTable& table, int n, MethodTag method = MethodTag::method_c);

/// Direct evaluation of the Fourier series at one angle pair.
Complex eval_series(const FourierTable& table, double theta, double phi);

/// Tr[rho R(theta, phi) M_s R^dagger(theta, phi)] by dense matrix algebra,
/// with R the phase-space rotation. O(d^3) per point.
Complex direct_eval(const ComplexMatrix& rho, const ParityOperator& parity, double theta, double phi);

/// Same, reusing a J_y eigenbasis across many points.
Complex direct_eval(const ComplexMatrix& rho, const ParityOperator& parity, const EigenBasis& basis, double theta,
                    double phi);

/// Fills an n x n grid pointwise from f(theta, phi).
PhaseSpaceGrid sample_pointwise(SpinDimension dim, double s, int n, MethodTag method,
                                const std::function<Complex(double, double)>& f);

/// Rectangular window of a grid: the rows with theta_k <= theta_max and the
/// columns with phi_lo <= phi_l <= phi_hi, with their angles.
struct GridWindow {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> thetas;
  std::vector<double> phis;
  ComplexMatrix values;
};

/// Throws DomainError when no grid node falls inside the window.
GridWindow window_extract(const PhaseSpaceGrid& grid, double theta_max, double phi_lo, double phi_hi);

}  // namespace sps
