#include "lagflow/field/random_fields.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "lagflow/field/modes.hpp"
#include "lagflow/field/spectral_ops.hpp"

namespace lagflow {

namespace {

// Visits the half-space of integer wavevectors with |j| <= K in an order that
// depends only on K. Every visited vector consumes the same number of draws
// whether or not it lies in the band, so the stream is grid-independent.
template <std::size_t C>
SpectralField<C> draw_band(const Grid3& g, const BandSpec& band, std::uint64_t seed) {
  if (!(band.k_min >= 0.0 && band.k_max >= band.k_min && band.k_max > 0.0))
    throw std::invalid_argument("random band: need 0 <= k_min <= k_max, k_max > 0");
  const int K = static_cast<int>(std::floor(band.k_max));
  if (K > g.n / 3) throw std::invalid_argument("random band: k_max exceeds the dealiasing cut n/3");

  SpectralField<C> out(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = g.n;
  for (int jz = -K; jz <= K; ++jz) {
    for (int jy = -K; jy <= K; ++jy) {
      for (int jx = 0; jx <= K; ++jx) {
        const bool upper = jx > 0 || jy > 0 || (jy == 0 && jz > 0);
        if (!upper) continue;
        std::array<Complex, C> draw;
        for (auto& d : draw) {
          const double re = normal(rng);
          const double im = normal(rng);
          d = Complex(re, im);
        }
        const double r = std::sqrt(double(jx * jx + jy * jy + jz * jz));
        if (r < band.k_min || r > band.k_max || r == 0.0) continue;
        const double amp = std::pow(r, -band.slope);
        const std::size_t idx = g.mode(jx, (jy + n) % n, (jz + n) % n);
        for (std::size_t c = 0; c < C; ++c) out.comp[c][idx] = amp * draw[c];
        if (jx == 0) {
          const std::size_t mirror = g.mode(0, (n - jy) % n, (n - jz) % n);
          for (std::size_t c = 0; c < C; ++c) out.comp[c][mirror] = std::conj(amp * draw[c]);
        }
      }
    }
  }
  return out;
}

}  // namespace

SpectralVectorField random_band_vector(const Grid3& g, const BandSpec& band, std::uint64_t seed,
                                       bool divergence_free) {
  SpectralVectorField f = draw_band<3>(g, band, seed);
  if (divergence_free) f = leray_project(f);
  return f;
}

SpectralScalarField random_band_scalar(const Grid3& g, const BandSpec& band, std::uint64_t seed) {
  return draw_band<1>(g, band, seed);
}

template <std::size_t C>
double spectral_energy(const SpectralField<C>& f) {
  const double s = sobolev_norm(f, 0.0);
  return s * s;
}

template <std::size_t C>
SpectralField<C> scaled(const SpectralField<C>& f, double s) {
  SpectralField<C> out = f;
  for (auto& c : out.comp)
    for (auto& v : c) v *= s;
  return out;
}

template double spectral_energy(const SpectralField<1>&);
template double spectral_energy(const SpectralField<3>&);
template double spectral_energy(const SpectralField<9>&);
template SpectralField<1> scaled(const SpectralField<1>&, double);
template SpectralField<3> scaled(const SpectralField<3>&, double);
template SpectralField<9> scaled(const SpectralField<9>&, double);

}  // namespace lagflow
