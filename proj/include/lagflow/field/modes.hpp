#pragma once

#include <cmath>
#include <numbers>

#include "lagflow/field/grid.hpp"

namespace lagflow {

/// Everything a spectral loop needs about one half-complex mode.
struct ModeInfo {
  int ix, iy, iz;
  int jx, jy, jz;          // signed integer wavenumbers (Nyquist negative)
  double kx, ky, kz;       // physical wavenumbers
  double dkx, dky, dkz;    // derivative symbols; zero on a Nyquist index
  double weight;           // Parseval multiplicity
  std::size_t index;

  double k2() const { return kx * kx + ky * ky + kz * kz; }
  double dk2() const { return dkx * dkx + dky * dky + dkz * dkz; }
};

/// Calls fn(const ModeInfo&) for every stored mode, z outermost.
template <typename Fn>
void for_each_mode(const Grid3& g, Fn&& fn) {
  const int n = g.n;
  const int h = g.half();
  const double k0 = 2.0 * std::numbers::pi / g.box_len;
  ModeInfo m{};
  for (int iz = 0; iz < n; ++iz) {
    m.iz = iz;
    m.jz = g.wavenumber(iz);
    m.kz = k0 * m.jz;
    m.dkz = g.is_nyquist(iz) ? 0.0 : m.kz;
    for (int iy = 0; iy < n; ++iy) {
      m.iy = iy;
      m.jy = g.wavenumber(iy);
      m.ky = k0 * m.jy;
      m.dky = g.is_nyquist(iy) ? 0.0 : m.ky;
      for (int ix = 0; ix < h; ++ix) {
        m.ix = ix;
        m.jx = ix;
        m.kx = k0 * ix;
        m.dkx = g.is_nyquist(ix) ? 0.0 : m.kx;
        m.weight = g.x_weight(ix);
        m.index = g.mode(ix, iy, iz);
        fn(static_cast<const ModeInfo&>(m));
      }
    }
  }
}

}  // namespace lagflow
