#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/random_fields.hpp"
#include "lagflow/field/spectral_ops.hpp"

namespace testutil {

inline lagflow::RealVectorField random_real(const lagflow::Grid3& g, std::uint64_t seed) {
  lagflow::RealVectorField f(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& c : f.comp)
    for (double& v : c) v = u(rng);
  return f;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

template <std::size_t C>
double max_abs_diff(const lagflow::RealField<C>& a, const lagflow::RealField<C>& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) m = std::max(m, std::abs(a.comp[c][i] - b.comp[c][i]));
  return m;
}

template <std::size_t C>
double max_abs_diff(const lagflow::SpectralField<C>& a, const lagflow::SpectralField<C>& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) m = std::max(m, std::abs(a.comp[c][i] - b.comp[c][i]));
  return m;
}

template <std::size_t C>
double max_abs(const lagflow::SpectralField<C>& a) {
  double m = 0.0;
  for (const auto& c : a.comp)
    for (const auto& v : c) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace testutil
