#include "sps/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "sps/angular.hpp"

namespace sps {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t count)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))), size(count) {
    if (!data) throw std::bad_alloc();
    std::fill_n(reinterpret_cast<double*>(data), 2 * count, 0.0);
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* data;
  std::size_t size;
};

int wrap(int freq, int period) { return ((freq % period) + period) % period; }

}  // namespace

std::string to_string(MethodTag tag) {
  switch (tag) {
    case MethodTag::method_b: return "b";
    case MethodTag::method_c: return "c";
    case MethodTag::method_d: return "d";
    case MethodTag::direct: return "direct";
    case MethodTag::matrix: return "matrix";
  }
  return "unknown";
}

double PhaseSpaceGrid::theta(int k) const { return std::numbers::pi * k / n; }
double PhaseSpaceGrid::phi(int l) const { return 2.0 * std::numbers::pi * l / n; }

double PhaseSpaceGrid::imaginary_residue() const {
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  return values.imag().cwiseAbs().maxCoeff() / peak;
}

double PhaseSpaceGrid::pole_spread() const {
  return (values.row(0).array() - values(0, 0)).abs().maxCoeff();
}

int minimal_grid_size(SpinDimension dim) { return 2 * dim.two_j() + 2; }

int default_grid_size(SpinDimension dim) {
  int n = 1;
  while (n < minimal_grid_size(dim)) n *= 2;
  return std::max(512, n);
}

void validate_grid_size(SpinDimension dim, int n) {
  if (n < minimal_grid_size(dim)) {
    throw ResolutionError("grid size n = " + std::to_string(n) + " is below the 4J + 2 = " +
                          std::to_string(minimal_grid_size(dim)) + " sampling bound for d = " +
                          std::to_string(dim.dim()));
  }
  if (n % 2 != 0) throw ResolutionError("grid size n = " + std::to_string(n) + " must be even");
}

ComplexMatrix sample_fft_full(const FourierTable& table, int n) {
  validate_grid_size(table.dim(), n);
  const int rows = 2 * n;
  const int limit = table.band_limit();
  FftwBuffer buffer(static_cast<std::size_t>(rows) * n);

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(rows, n, buffer.data, buffer.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  std::unique_ptr<fftw_plan_s, void (*)(fftw_plan)> plan_guard(plan, [](fftw_plan p) {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  });

  for (int ell = -limit; ell <= limit; ++ell) {
    for (int m = -limit; m <= limit; ++m) {
      const Complex f = table(ell, m);
      auto& slot = buffer.data[static_cast<std::size_t>(wrap(ell, rows)) * n + wrap(m, n)];
      slot[0] = f.real();
      slot[1] = f.imag();
    }
  }
  fftw_execute(plan);

  ComplexMatrix out(rows, n);
  for (int k = 0; k < rows; ++k) {
    for (int l = 0; l < n; ++l) {
      const auto& v = buffer.data[static_cast<std::size_t>(k) * n + l];
      out(k, l) = Complex(v[0], v[1]);
    }
  }
  return out;
}

PhaseSpaceGrid sample_fft(const FourierTable& table, int n, MethodTag method) {
  ComplexMatrix full = sample_fft_full(table, n);
  return PhaseSpaceGrid{table.dim(), table.s(), n, method, full.topRows(n)};
}

Complex eval_series(const FourierTable& table, double theta, double phi) {
  const int limit = table.band_limit();
  Complex acc = 0.0;
  for (int ell = -limit; ell <= limit; ++ell) {
    Complex row = 0.0;
    for (int m = -limit; m <= limit; ++m) row += table(ell, m) * std::polar(1.0, m * phi);
    acc += row * std::polar(1.0, ell * theta);
  }
  return acc;
}

Complex direct_eval(const ComplexMatrix& rho, const ParityOperator& parity, const EigenBasis& basis, double theta,
                    double phi) {
  require_square(rho, parity.dim, "direct_eval");
  if (!(basis.dim == parity.dim)) throw DimensionMismatch("direct_eval: basis and parity disagree on d");
  const ComplexMatrix r = phase_space_rotation(basis, theta, phi);
  const ComplexMatrix rotated = r * parity.diag.cast<Complex>().asDiagonal() * r.adjoint();
  // Tr(rho X) = sum_ab rho_ab X_ba
  return (rho.array() * rotated.transpose().array()).sum();
}

Complex direct_eval(const ComplexMatrix& rho, const ParityOperator& parity, double theta, double phi) {
  return direct_eval(rho, parity, jy_eigenbasis(parity.dim), theta, phi);
}

PhaseSpaceGrid sample_pointwise(SpinDimension dim, double s, int n, MethodTag method,
                                const std::function<Complex(double, double)>& f) {
  validate_grid_size(dim, n);
  PhaseSpaceGrid grid{dim, s, n, method, ComplexMatrix(n, n)};
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) grid.values(k, l) = f(grid.theta(k), grid.phi(l));
  }
  return grid;
}

GridWindow window_extract(const PhaseSpaceGrid& grid, double theta_max, double phi_lo, double phi_hi) {
  GridWindow w;
  for (int k = 0; k < grid.n; ++k) {
    // Relative slack so that theta_max = pi k / n selects row k.
    if (grid.theta(k) <= theta_max * (1.0 + 1e-12) + 1e-15) {
      w.rows.push_back(k);
      w.thetas.push_back(grid.theta(k));
    }
  }
  for (int l = 0; l < grid.n; ++l) {
    const double p = grid.phi(l);
    if (p >= phi_lo - 1e-12 && p <= phi_hi + 1e-12) {
      w.cols.push_back(l);
      w.phis.push_back(p);
    }
  }
  if (w.rows.empty() || w.cols.empty()) {
    throw DomainError("window_extract: window contains no grid nodes");
  }
  w.values.resize(static_cast<Eigen::Index>(w.rows.size()), static_cast<Eigen::Index>(w.cols.size()));
  for (std::size_t r = 0; r < w.rows.size(); ++r) {
    for (std::size_t c = 0; c < w.cols.size(); ++c) w.values(r, c) = grid.values(w.rows[r], w.cols[c]);
  }
  return w;
}

}  // namespace sps
