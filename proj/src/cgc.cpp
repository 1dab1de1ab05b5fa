#include "sps/cgc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sps/parity.hpp"

namespace sps {

namespace {

constexpr double kRescaleAbove = 1e150;

bool same_parity(int a, int b) { return ((a - b) % 2) == 0; }

double sign_of_parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double ThreeJSweep::at(int two_j1) const {
  if (values.empty() || two_j1 < two_j1_min || two_j1 > two_j1_max() || !same_parity(two_j1, two_j1_min)) {
    return 0.0;
  }
  return values[static_cast<std::size_t>((two_j1 - two_j1_min) / 2)];
}

ThreeJSweep wigner3j_sweep(int two_j2, int two_j3, int two_m2, int two_m3) {
  ThreeJSweep out;
  const int two_m1 = -two_m2 - two_m3;
  if (std::abs(two_m2) > two_j2 || std::abs(two_m3) > two_j3) return out;
  const int lo = std::max(std::abs(two_j2 - two_j3), std::abs(two_m1));
  const int hi = two_j2 + two_j3;
  if (hi < lo) return out;
  out.two_j1_min = lo;
  const int n = (hi - lo) / 2 + 1;
  out.values.assign(static_cast<std::size_t>(n), 0.0);

  const double j2 = 0.5 * two_j2, j3 = 0.5 * two_j3;
  const double m1 = 0.5 * two_m1, m2 = 0.5 * two_m2, m3 = 0.5 * two_m3;
  const double j_min = 0.5 * lo;
  auto j_at = [&](int k) { return j_min + k; };
  auto coef_a = [&](double j) {
    const double t1 = j * j - (j2 - j3) * (j2 - j3);
    const double t2 = (j2 + j3 + 1.0) * (j2 + j3 + 1.0) - j * j;
    const double t3 = j * j - m1 * m1;
    return std::sqrt(std::max(0.0, t1 * t2 * t3));
  };
  auto coef_b = [&](double j) {
    return -(2.0 * j + 1.0) * (j2 * (j2 + 1.0) * m1 - j3 * (j3 + 1.0) * m1 - j * (j + 1.0) * (m3 - m2));
  };

  auto& f = out.values;
  const double upper_sign = sign_of_parity((two_j2 - two_j3 - two_m1) / 2);
  if (n == 1) {
    f[0] = upper_sign / std::sqrt(2.0 * j_min + 1.0);
    return out;
  }

  // Forward sweep from j_min while the solution keeps growing.
  std::vector<double> fwd(static_cast<std::size_t>(n), 0.0);
  fwd[0] = 1.0;
  if (lo == 0) {
    // j * A(j+1) vanishes at j = 0; take the j -> 0 limit of B(j) / j.
    fwd[1] = -(m3 - m2) / coef_a(1.0);
  } else {
    fwd[1] = -coef_b(j_min) / (j_min * coef_a(j_min + 1.0));
  }
  int mid = 1;
  while (mid + 1 < n && std::abs(fwd[mid]) > std::abs(fwd[mid - 1])) {
    const double j = j_at(mid);
    fwd[mid + 1] = -(coef_b(j) * fwd[mid] + (j + 1.0) * coef_a(j) * fwd[mid - 1]) / (j * coef_a(j + 1.0));
    ++mid;
    if (std::abs(fwd[mid]) > kRescaleAbove) {
      for (int k = 0; k <= mid; ++k) fwd[k] /= kRescaleAbove;
    }
  }
  // fwd is valid on [0, mid]; the peak sits at mid - 1 unless the sweep hit the end.
  const int match = std::max(1, std::min(mid - 1, n - 2));

  // Backward sweep from j_max down to match - 1.
  std::vector<double> bwd(static_cast<std::size_t>(n), 0.0);
  bwd[n - 1] = 1.0;
  {
    const double j = j_at(n - 1);
    bwd[n - 2] = -coef_b(j) / ((j + 1.0) * coef_a(j));
  }
  for (int k = n - 2; k > match - 1; --k) {
    const double j = j_at(k);
    bwd[k - 1] = -(coef_b(j) * bwd[k] + j * coef_a(j + 1.0) * bwd[k + 1]) / ((j + 1.0) * coef_a(j));
    if (std::abs(bwd[k - 1]) > kRescaleAbove) {
      for (int i = k - 1; i < n; ++i) bwd[i] /= kRescaleAbove;
    }
  }

  // Least-squares match over the overlap {match-1, match, match+1} within [0, mid].
  double num = 0.0, den = 0.0;
  for (int k = match - 1; k <= std::min(match + 1, mid); ++k) {
    num += fwd[k] * bwd[k];
    den += fwd[k] * fwd[k];
  }
  const double scale = den > 0.0 ? num / den : 0.0;
  for (int k = 0; k < match; ++k) f[k] = fwd[k] * scale;
  for (int k = match; k < n; ++k) f[k] = bwd[k];

  double norm = 0.0;
  for (int k = 0; k < n; ++k) norm += (2.0 * j_at(k) + 1.0) * f[k] * f[k];
  double factor = 1.0 / std::sqrt(norm);
  if ((f[n - 1] < 0.0) != (upper_sign < 0.0)) factor = -factor;
  for (auto& v : f) v *= factor;
  return out;
}

double clebsch_gordan(const CgcQuery& q) {
  if (q.two_j1 < 0 || q.two_j2 < 0 || q.two_j < 0) {
    throw DomainError("clebsch_gordan: negative angular momentum");
  }
  if (!same_parity(q.two_j1, q.two_m1) || !same_parity(q.two_j2, q.two_m2) || !same_parity(q.two_j, q.two_m) ||
      !same_parity(q.two_j1 + q.two_j2, q.two_j)) {
    throw DomainError("clebsch_gordan: inconsistent integer / half-integer quantum numbers");
  }
  if (std::abs(q.two_m1) > q.two_j1 || std::abs(q.two_m2) > q.two_j2 || std::abs(q.two_m) > q.two_j) {
    throw DomainError("clebsch_gordan: |m| exceeds j");
  }
  if (q.two_m1 + q.two_m2 != q.two_m) return 0.0;
  if (q.two_j < std::abs(q.two_j1 - q.two_j2) || q.two_j > q.two_j1 + q.two_j2) return 0.0;

  // C^{jm}_{j1m1,j2m2} = (-1)^{j1-j2+m} sqrt(2j+1) (j1 j2 j; m1 m2 -m), and the
  // 3j symbol is invariant under the cyclic shift to (j j1 j2; -m m1 m2).
  const ThreeJSweep sweep = wigner3j_sweep(q.two_j1, q.two_j2, q.two_m1, q.two_m2);
  const double phase = sign_of_parity((q.two_j1 - q.two_j2 + q.two_m) / 2);
  return phase * std::sqrt(q.two_j + 1.0) * sweep.at(q.two_j);
}

ComplexMatrix tensor_operator(SpinDimension dim, int j, int m) {
  if (j < 0 || j > dim.two_j() || std::abs(m) > j) {
    throw DomainError("tensor_operator: (j, m) = (" + std::to_string(j) + ", " + std::to_string(m) +
                      ") out of range for 2J = " + std::to_string(dim.two_j()));
  }
  const int d = dim.dim();
  const double norm = std::sqrt((2.0 * j + 1.0) / d);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const int row = col - m;  // m1 - m2 = m in the descending basis
    if (row < 0 || row >= d) continue;
    out(row, col) = norm * clebsch_gordan({dim.two_j(), dim.two_m_of_index(col), 2 * j, 2 * m, dim.two_j(),
                                           dim.two_m_of_index(row)});
  }
  return out;
}

CoefficientTable expansion_coefficients(const ComplexMatrix& rho) {
  const SpinDimension dim = dimension_of(rho);
  const int d = dim.dim();
  CoefficientTable table(dim);
  for (int j = 0; j <= dim.two_j(); ++j) {
    const double norm = std::sqrt((2.0 * j + 1.0) / d);
    for (int m = -j; m <= j; ++m) {
      // Tr(rho T^dagger) = sum over the entries of T_jm, which sit on the
      // diagonal row = col - m; T_jm is real.
      Complex acc = 0.0;
      for (int col = std::max(0, m); col < std::min(d, d + m); ++col) {
        const int row = col - m;
        const double t = norm * clebsch_gordan({dim.two_j(), dim.two_m_of_index(col), 2 * j, 2 * m, dim.two_j(),
                                                dim.two_m_of_index(row)});
        acc += rho(row, col) * t;
      }
      table(j, m) = acc;
    }
  }
  return table;
}

std::vector<Complex> spherical_harmonics_upto(int max_rank, double theta, double phi) {
  if (max_rank < 0) throw DomainError("spherical_harmonics_upto: negative rank");
  const int rows = max_rank + 1;
  std::vector<Complex> out(static_cast<std::size_t>(rows) * rows, Complex(0.0, 0.0));
  auto slot = [](int j, int m) { return static_cast<std::size_t>(j * j + m + j); };

  const double x = std::cos(theta);
  const double sine = std::abs(std::sin(theta));
  const double log_sine = sine > 0.0 ? std::log(sine) : -std::numeric_limits<double>::infinity();

  // Normalized associated Legendre functions, recursion in j at fixed m with a
  // running log scale so that sin^m theta never underflows prematurely.
  double log_pmm = 0.5 * std::log(1.0 / (4.0 * std::numbers::pi));
  for (int m = 0; m <= max_rank; ++m) {
    if (m > 0) log_pmm += 0.5 * std::log((2.0 * m + 1.0) / (2.0 * m));
    const double log_start = log_pmm + (m > 0 ? m * log_sine : 0.0);
    const double cs_sign = (m % 2 == 0) ? 1.0 : -1.0;
    const Complex phase = std::polar(1.0, m * phi);

    double log_scale = log_start;
    double prev = 0.0;
    double cur = 1.0;  // P_m^m / exp(log_scale)
    for (int j = m; j <= max_rank; ++j) {
      if (j == m + 1) {
        prev = cur;
        cur = x * std::sqrt(2.0 * m + 3.0) * prev;
      } else if (j > m + 1) {
        const double jj = j;
        const double a = std::sqrt((4.0 * jj * jj - 1.0) / (jj * jj - double(m) * m));
        const double a_prev = std::sqrt((4.0 * (jj - 1) * (jj - 1) - 1.0) / ((jj - 1) * (jj - 1) - double(m) * m));
        const double next = a * (x * cur - prev / a_prev);
        prev = cur;
        cur = next;
      }
      if (std::abs(cur) > kRescaleAbove) {
        cur /= kRescaleAbove;
        prev /= kRescaleAbove;
        log_scale += std::log(kRescaleAbove);
      }
      const double p = std::isfinite(log_scale) ? cs_sign * cur * std::exp(log_scale) : 0.0;
      const Complex y = p * phase;
      out[slot(j, m)] = y;
      if (m > 0) out[slot(j, -m)] = cs_sign * std::conj(y);
    }
  }
  return out;
}

Complex spherical_harmonic(int j, int m, double theta, double phi) {
  if (j < 0 || std::abs(m) > j) {
    throw DomainError("spherical_harmonic: |m| > j");
  }
  return spherical_harmonics_upto(j, theta, phi)[static_cast<std::size_t>(j * j + m + j)];
}

Complex method_b_eval(const CoefficientTable& c, double s, double theta, double phi, bool allow_extended_s) {
  const SpinDimension dim = c.dim();
  const std::vector<double> weights = gamma_powers(dim, s, allow_extended_s);
  const std::vector<Complex> y = spherical_harmonics_upto(dim.two_j(), theta, phi);
  Complex acc = 0.0;
  for (int j = 0; j <= dim.two_j(); ++j) {
    for (int m = -j; m <= j; ++m) {
      acc += weights[static_cast<std::size_t>(j)] * c(j, m) * y[static_cast<std::size_t>(j * j + m + j)];
    }
  }
  return acc / spherical_radius(dim);
}

Complex method_b_eval(const ComplexMatrix& rho, double s, double theta, double phi, bool allow_extended_s) {
  return method_b_eval(expansion_coefficients(rho), s, theta, phi, allow_extended_s);
}

}  // namespace sps
