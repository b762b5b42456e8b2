#pragma once

#include <cstdint>

#include "lagflow/field/field.hpp"

namespace lagflow {

/// Band-limited random field whose continuum content does not depend on the
/// grid: coefficients are drawn per integer wavevector j with
/// k_min <= |j| <= k_max in a fixed enumeration order, so the same seed gives
/// the same function on every grid that resolves the band.
struct BandSpec {
  double k_min = 1.0;
  double k_max = 4.0;
  /// Amplitude multiplier |j|^{-slope} applied to the Gaussian draws.
  double slope = 0.0;
};

/// Throws std::invalid_argument if the band is not resolved below the 2/3 cut.
SpectralVectorField random_band_vector(const Grid3& g, const BandSpec& band, std::uint64_t seed,
                                       bool divergence_free);
SpectralScalarField random_band_scalar(const Grid3& g, const BandSpec& band, std::uint64_t seed);

/// Squared L2 norm from coefficients (L^3 * sum w |c|^2).
template <std::size_t C>
double spectral_energy(const SpectralField<C>& f);

template <std::size_t C>
SpectralField<C> scaled(const SpectralField<C>& f, double s);

}  // namespace lagflow
