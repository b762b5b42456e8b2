#include "lagflow/field/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/modes.hpp"

namespace lagflow {

namespace {

template <std::size_t C>
void require_same_grid(const SpectralField<C>& a, const SpectralField<C>& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

SpectralVectorField leray_project(const SpectralVectorField& f) {
  SpectralVectorField out = f;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    const double k2 = m.dk2();
    if (k2 == 0.0) return;
    const std::size_t i = m.index;
    const Complex kc = m.dkx * f.comp[0][i] + m.dky * f.comp[1][i] + m.dkz * f.comp[2][i];
    const Complex s = kc / k2;
    out.comp[0][i] -= m.dkx * s;
    out.comp[1][i] -= m.dky * s;
    out.comp[2][i] -= m.dkz * s;
  });
  out.divergence_free = true;
  return out;
}

template <std::size_t C>
SpectralField<C> mollify(const SpectralField<C>& f, int n_moll) {
  if (n_moll < 1) throw std::invalid_argument("mollify: n_moll must be >= 1");
  SpectralField<C> out = f;
  const double inv = 1.0 / (2.0 * double(n_moll) * double(n_moll));
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    const double factor = std::exp(-m.k2() * inv);
    for (auto& c : out.comp) c[m.index] *= factor;
  });
  return out;
}

template <std::size_t C>
SpectralField<C> dealias(const SpectralField<C>& f) {
  SpectralField<C> out = f;
  const int cut = f.grid.n / 3;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    if (std::abs(m.jx) > cut || std::abs(m.jy) > cut || std::abs(m.jz) > cut)
      for (auto& c : out.comp) c[m.index] = Complex{};
  });
  return out;
}

template <std::size_t C>
double sobolev_norm(const SpectralField<C>& f, double s) {
  if (!(s >= 0.0 && s <= 4.0)) throw std::invalid_argument("sobolev_norm: s must lie in [0, 4]");
  double sum = 0.0;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    double a = 0.0;
    for (const auto& c : f.comp) a += std::norm(c[m.index]);
    if (a == 0.0) return;
    const double k2 = m.k2();
    if (s > 0.0 && k2 == 0.0) return;
    sum += m.weight * (s == 0.0 ? 1.0 : std::pow(k2, s)) * a;
  });
  return std::sqrt(f.grid.volume() * sum);
}

template <std::size_t C>
double fourier_lebesgue_norm(const SpectralField<C>& f) {
  double sum = 0.0;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    double a = 0.0;
    for (const auto& c : f.comp) a += std::norm(c[m.index]);
    sum += m.weight * std::sqrt(a);
  });
  return sum;
}

template <std::size_t C>
double l2_norm(const RealField<C>& f) {
  return std::sqrt(inner_product(f, f));
}

template <std::size_t C>
double inner_product(const RealField<C>& f, const RealField<C>& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("fields live on different grids");
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    const auto& a = f.comp[c];
    const auto& b = g.comp[c];
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  }
  return sum * f.grid.cell_volume();
}

template <std::size_t C>
ScalarField magnitude(const RealField<C>& f) {
  ScalarField out(f.grid);
  auto& o = out.comp[0];
  for (std::size_t i = 0; i < o.size(); ++i) {
    double a = 0.0;
    for (const auto& c : f.comp) a += c[i] * c[i];
    o[i] = std::sqrt(a);
  }
  return out;
}

template <std::size_t C>
double sup_norm(const RealField<C>& f) {
  const ScalarField m = magnitude(f);
  return m.comp[0].empty() ? 0.0 : *std::max_element(m.comp[0].begin(), m.comp[0].end());
}

SpectralField<9> spectral_gradient(const SpectralVectorField& f) {
  SpectralField<9> out(f.grid);
  const Complex I(0.0, 1.0);
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    const double dk[3] = {m.dkx, m.dky, m.dkz};
    for (int i = 0; i < 3; ++i) {
      const Complex c = f.comp[i][m.index];
      for (int j = 0; j < 3; ++j) out.comp[3 * i + j][m.index] = I * dk[j] * c;
    }
  });
  return out;
}

TensorField gradient(const SpectralVectorField& f) { return to_real(spectral_gradient(f)); }

RealVectorField gradient(const SpectralScalarField& f) {
  SpectralVectorField g(f.grid);
  const Complex I(0.0, 1.0);
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    const Complex c = f.comp[0][m.index];
    g.comp[0][m.index] = I * m.dkx * c;
    g.comp[1][m.index] = I * m.dky * c;
    g.comp[2][m.index] = I * m.dkz * c;
  });
  return to_real(g);
}

double divergence_residual(const SpectralVectorField& f) {
  double worst = 0.0;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    const std::size_t i = m.index;
    const double a = std::sqrt(std::norm(f.comp[0][i]) + std::norm(f.comp[1][i]) + std::norm(f.comp[2][i]));
    if (a == 0.0 || m.dk2() == 0.0) return;
    const Complex kc = m.dkx * f.comp[0][i] + m.dky * f.comp[1][i] + m.dkz * f.comp[2][i];
    worst = std::max(worst, std::abs(kc) / (a * std::sqrt(m.dk2())));
  });
  return worst;
}

template <std::size_t C>
SpectralField<C> upsample(const SpectralField<C>& f, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    throw std::invalid_argument("upsample: factor must be a power of two");
  if (factor == 1) return f;
  const Grid3 fine(f.grid.n * factor, f.grid.box_len);
  SpectralField<C> out(fine);
  out.divergence_free = f.divergence_free;
  const int N = fine.n;
  const Grid3& g = f.grid;
  const int nyq = g.n / 2;

  for_each_mode(g, [&](const ModeInfo& m) {
    // A Nyquist coefficient stands for a cosine, so it is shared between +nyq and -nyq.
    int ys[2] = {m.jy, m.jy};
    int zs[2] = {m.jz, m.jz};
    int ny = 1, nz = 1;
    double share = 1.0;
    if (g.is_nyquist(m.iy)) {
      ys[1] = nyq;
      ny = 2;
      share *= 0.5;
    }
    if (g.is_nyquist(m.iz)) {
      zs[1] = nyq;
      nz = 2;
      share *= 0.5;
    }
    if (g.is_nyquist(m.ix)) share *= 0.5;
    for (int a = 0; a < ny; ++a) {
      for (int b = 0; b < nz; ++b) {
        const int ty = (ys[a] + N) % N;
        const int tz = (zs[b] + N) % N;
        const std::size_t dst = fine.mode(m.ix, ty, tz);
        for (std::size_t c = 0; c < C; ++c) out.comp[c][dst] += share * f.comp[c][m.index];
      }
    }
  });
  return out;
}

template <std::size_t C>
SpectralField<C> axpby(double a, const SpectralField<C>& f, double b, const SpectralField<C>& g) {
  require_same_grid(f, g);
  SpectralField<C> out(f.grid);
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < out.comp[c].size(); ++i) out.comp[c][i] = a * f.comp[c][i] + b * g.comp[c][i];
  out.divergence_free = f.divergence_free && g.divergence_free;
  return out;
}

namespace {

// Per-axis phase tables for evaluating the trigonometric sum at one point.
struct Phases {
  std::vector<Complex> ex, ey, ez;
};

Phases phases_at(const Grid3& g, const Vec3& x) {
  Phases p;
  const int n = g.n;
  p.ex.resize(g.half());
  p.ey.resize(n);
  p.ez.resize(n);
  for (int ix = 0; ix < g.half(); ++ix) p.ex[ix] = std::polar(1.0, g.k_of(ix) * x.x);
  for (int i = 0; i < n; ++i) {
    const double ky = g.k_of(g.wavenumber(i));
    const double kz = ky;
    if (g.is_nyquist(i)) {
      p.ey[i] = Complex(std::cos(ky * x.y), 0.0);
      p.ez[i] = Complex(std::cos(kz * x.z), 0.0);
    } else {
      p.ey[i] = std::polar(1.0, ky * x.y);
      p.ez[i] = std::polar(1.0, kz * x.z);
    }
  }
  return p;
}

template <std::size_t C>
std::array<double, C> evaluate(const SpectralField<C>& f, const Vec3& x) {
  const Grid3& g = f.grid;
  const Phases p = phases_at(g, x);
  std::array<double, C> acc{};
  const int h = g.half();
  for (int iz = 0; iz < g.n; ++iz) {
    for (int iy = 0; iy < g.n; ++iy) {
      const Complex eyz = p.ey[iy] * p.ez[iz];
      const std::size_t base = g.mode(0, iy, iz);
      for (int ix = 0; ix < h; ++ix) {
        const Complex e = eyz * p.ex[ix];
        const double w = g.x_weight(ix);
        for (std::size_t c = 0; c < C; ++c) {
          const Complex v = f.comp[c][base + ix];
          acc[c] += w * (v.real() * e.real() - v.imag() * e.imag());
        }
      }
    }
  }
  return acc;
}

template <std::size_t C>
std::array<double, C> trilinear(const RealField<C>& f, const Vec3& x) {
  const Grid3& g = f.grid;
  const int n = g.n;
  const double inv_h = 1.0 / g.spacing();
  int i0[3], i1[3];
  double t[3];
  for (int d = 0; d < 3; ++d) {
    const double s = wrap_coord(x[d], g.box_len) * inv_h;
    double fl = std::floor(s);
    int i = static_cast<int>(fl);
    t[d] = s - fl;
    if (i >= n) {
      i -= n;
    }
    i0[d] = i;
    i1[d] = (i + 1) % n;
  }
  std::array<double, C> acc{};
  for (int c8 = 0; c8 < 8; ++c8) {
    const int bx = c8 & 1, by = (c8 >> 1) & 1, bz = (c8 >> 2) & 1;
    const double w = (bx ? t[0] : 1.0 - t[0]) * (by ? t[1] : 1.0 - t[1]) * (bz ? t[2] : 1.0 - t[2]);
    if (w == 0.0) continue;
    const std::size_t idx = g.node(bx ? i1[0] : i0[0], by ? i1[1] : i0[1], bz ? i1[2] : i0[2]);
    for (std::size_t c = 0; c < C; ++c) acc[c] += w * f.comp[c][idx];
  }
  return acc;
}

}  // namespace

Vec3 sample_spectral(const SpectralVectorField& f, const Vec3& x) {
  const auto v = evaluate(f, x);
  return {v[0], v[1], v[2]};
}

double sample_spectral(const SpectralScalarField& f, const Vec3& x) { return evaluate(f, x)[0]; }

Vec3 sample_trilinear(const RealVectorField& f, const Vec3& x) {
  const auto v = trilinear(f, x);
  return {v[0], v[1], v[2]};
}

double sample_trilinear(const ScalarField& f, const Vec3& x) { return trilinear(f, x)[0]; }

Vec3 sample_velocity(const SpectralVectorField& f, const Vec3& x, SampleMode mode) {
  if (mode == SampleMode::spectral) return sample_spectral(f, x);
  return sample_trilinear(to_real(f), x);
}

#define LAGFLOW_INSTANTIATE(C)                                                                       \
  template SpectralField<C> mollify(const SpectralField<C>&, int);                                   \
  template SpectralField<C> dealias(const SpectralField<C>&);                                        \
  template double sobolev_norm(const SpectralField<C>&, double);                                     \
  template double fourier_lebesgue_norm(const SpectralField<C>&);                                    \
  template double l2_norm(const RealField<C>&);                                                      \
  template double inner_product(const RealField<C>&, const RealField<C>&);                           \
  template ScalarField magnitude(const RealField<C>&);                                               \
  template double sup_norm(const RealField<C>&);                                                     \
  template SpectralField<C> upsample(const SpectralField<C>&, int);                                  \
  template SpectralField<C> axpby(double, const SpectralField<C>&, double, const SpectralField<C>&);

LAGFLOW_INSTANTIATE(1)
LAGFLOW_INSTANTIATE(3)
LAGFLOW_INSTANTIATE(9)
#undef LAGFLOW_INSTANTIATE

}  // namespace lagflow
