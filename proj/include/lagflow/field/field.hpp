#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "lagflow/field/grid.hpp"

namespace lagflow {

using Complex = std::complex<double>;

/// Real samples of a C-component field on the nodes of a periodic grid.
template <std::size_t C>
struct RealField {
  Grid3 grid;
  std::array<std::vector<double>, C> comp;

  RealField() = default;
  explicit RealField(const Grid3& g) : grid(g) {
    for (auto& c : comp) c.assign(g.nodes(), 0.0);
  }
  static constexpr std::size_t components = C;
};

/// Fourier coefficients of a real C-component field, normalized so that
/// f(x) = sum_k c_k exp(i k.x) (forward transform carries 1/n^3).
/// Hermitian symmetry is implicit in the half-complex storage.
template <std::size_t C>
struct SpectralField {
  Grid3 grid;
  std::array<std::vector<Complex>, C> comp;
  bool divergence_free = false;

  SpectralField() = default;
  explicit SpectralField(const Grid3& g) : grid(g) {
    for (auto& c : comp) c.assign(g.modes(), Complex{});
  }
  static constexpr std::size_t components = C;
};

using ScalarField = RealField<1>;
using RealVectorField = RealField<3>;
/// Gradient tensor; comp[3*i + j] holds d_j f_i.
using TensorField = RealField<9>;

using SpectralScalarField = SpectralField<1>;
using SpectralVectorField = SpectralField<3>;

/// Node coordinates of a grid index (nodes sit at multiples of the spacing).
inline std::array<double, 3> node_position(const Grid3& g, int i, int j, int k) {
  const double h = g.spacing();
  return {i * h, j * h, k * h};
}

}  // namespace lagflow
