#pragma once

#include <cstdint>
#include <string>

#include "sps/spin.hpp"

namespace sps {

/// (|J,J> + |J,-J>) / sqrt 2, as a density matrix.
ComplexMatrix ghz(SpinDimension dim);

/// |J,m><J,m| with m = two_m / 2.
ComplexMatrix dicke(SpinDimension dim, int two_m);

/// One-axis twisted spin-up state exp(-i xi J_x^2)|J,J>.
ComplexMatrix squeezed(SpinDimension dim, double xi);

/// Spin-up state rotated to point along (theta0, phi0).
ComplexMatrix coherent(SpinDimension dim, double theta0, double phi0);

/// I / d.
ComplexMatrix mixed(SpinDimension dim);

/// Seeded random full-rank density matrix: G + G^dagger from a complex
/// Gaussian G, shifted positive definite and trace-normalized.
ComplexMatrix random_density(SpinDimension dim, std::uint64_t seed);

}  // namespace sps
