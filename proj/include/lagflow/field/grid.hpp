#pragma once

#include <cstddef>

namespace lagflow {

/// Uniform periodic grid on [0, box_len)^3 with n nodes per axis.
///
/// Real samples are stored x-fastest: index = i + n*(j + n*k). Spectral
/// coefficients use the half-complex layout of a real-to-complex transform
/// along x: index = ix + (n/2+1)*(iy + n*iz), ix in [0, n/2].
struct Grid3 {
  int n = 32;
  double box_len = 1.0;

  Grid3() = default;
  /// Throws std::invalid_argument unless n >= 8 is a power of two and box_len > 0.
  Grid3(int n, double box_len);

  double spacing() const { return box_len / n; }
  double cell_volume() const;
  double volume() const { return box_len * box_len * box_len; }
  std::size_t nodes() const { return std::size_t(n) * std::size_t(n) * std::size_t(n); }
  int half() const { return n / 2 + 1; }
  std::size_t modes() const { return std::size_t(half()) * std::size_t(n) * std::size_t(n); }

  std::size_t node(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(n) * (std::size_t(j) + std::size_t(n) * std::size_t(k));
  }
  std::size_t mode(int ix, int iy, int iz) const {
    return std::size_t(ix) + std::size_t(half()) * (std::size_t(iy) + std::size_t(n) * std::size_t(iz));
  }

  /// Signed integer wavenumber of a full-axis index (y or z); the Nyquist index maps to -n/2.
  int wavenumber(int index) const { return index < n / 2 ? index : index - n; }
  /// Physical wavenumber 2*pi*j/L.
  double k_of(int j) const;
  /// Multiplicity of a half-axis x index in Parseval sums.
  double x_weight(int ix) const { return (ix == 0 || ix == n / 2) ? 1.0 : 2.0; }
  bool is_nyquist(int index) const { return index == n / 2; }

  friend bool operator==(const Grid3&, const Grid3&) = default;
};

}  // namespace lagflow
