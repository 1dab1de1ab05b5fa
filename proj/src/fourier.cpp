#include "sps/fourier.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sps {

namespace {

constexpr int kPairwiseThreshold = 256;
constexpr int kPairwiseBlock = 32;

// Pairwise summation of term(first) + ... + term(last - 1).
template <typename Term>
Complex pairwise_sum(int first, int last, const Term& term) {
  if (last - first <= kPairwiseBlock) {
    Complex acc = 0.0;
    for (int i = first; i < last; ++i) acc += term(i);
    return acc;
  }
  const int mid = first + (last - first) / 2;
  return pairwise_sum(first, mid, term) + pairwise_sum(mid, last, term);
}

}  // namespace

KMatrix compute_k(const EigenBasis& basis, const TransformedParity& mtilde, int ell) {
  if (!(basis.dim == mtilde.dim)) {
    throw DimensionMismatch("compute_k: basis and transformed parity disagree on d");
  }
  const int d = basis.dim.dim();
  KMatrix out{basis.dim, mtilde.s, ell, ComplexMatrix::Zero(d, d)};
  if (std::abs(ell) > basis.dim.two_j()) return out;

  // Columns a and a + ell of U, a over the admissible range.
  const int first = std::max(0, -ell);
  const int count = d - std::abs(ell);
  ComplexVector weights(count);
  for (int k = 0; k < count; ++k) weights(k) = mtilde.matrix(first + k, first + k + ell);
  out.matrix.noalias() = (basis.vectors.middleCols(first, count) * weights.asDiagonal()) *
                         basis.vectors.middleCols(first + ell, count).adjoint();
  return out;
}

void accumulate_fourier_row(const ComplexMatrix& rho, const ComplexMatrix& k_ell, int ell, FourierTable& table) {
  const int d = table.dim().dim();
  const int limit = table.band_limit();
  for (int m = -limit; m <= limit; ++m) {
    const int first = std::max(0, -m);
    const int last = std::min(d, d - m);
    auto term = [&](int i) { return rho(i, i + m) * k_ell(i, i + m); };
    Complex acc = 0.0;
    if (last - first > kPairwiseThreshold) {
      acc = pairwise_sum(first, last, term);
    } else {
      for (int i = first; i < last; ++i) acc += term(i);
    }
    table(ell, m) = acc;
  }
}

FourierTable fourier_coefficients_method_c(const ComplexMatrix& rho, const ParityOperator& parity,
                                           const EigenBasis& basis, const MethodCOptions& options) {
  require_square(rho, basis.dim, "fourier_coefficients_method_c");
  if (!(parity.dim == basis.dim)) {
    throw DimensionMismatch("fourier_coefficients_method_c: parity and basis disagree on d");
  }
  const TransformedParity mtilde = transform_parity(parity, basis);
  FourierTable table(basis.dim, parity.s);
  const int limit = table.band_limit();

  auto run_row = [&](int ell) {
    const KMatrix k = compute_k(basis, mtilde, ell);
    accumulate_fourier_row(rho, k.matrix, ell, table);
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (int ell = -limit; ell <= limit; ++ell) run_row(ell);
    return table;
  }

  std::atomic<int> next{-limit};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int ell = next++; ell <= limit; ell = next++) {
          try {
            run_row(ell);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

FourierTable fourier_coefficients_method_c(const ComplexMatrix& rho, double s, bool allow_extended_s) {
  const SpinDimension dim = dimension_of(rho);
  return fourier_coefficients_method_c(rho, build_parity(dim, s, allow_extended_s), jy_eigenbasis(dim));
}

FourierTable derivative_coefficients(const FourierTable& table, AngleVariable variable) {
  FourierTable out(table.dim(), table.s());
  const int limit = table.band_limit();
  for (int ell = -limit; ell <= limit; ++ell) {
    for (int m = -limit; m <= limit; ++m) {
      const double freq = variable == AngleVariable::theta ? ell : m;
      out(ell, m) = Complex(0.0, freq) * table(ell, m);
    }
  }
  return out;
}

}  // namespace sps
