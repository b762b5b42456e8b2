#include "lagflow/field/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace lagflow {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW's planner is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::size_t nodes = std::size_t(n) * n * n;
  const std::size_t modes = std::size_t(n / 2 + 1) * n * n;
  std::vector<double> real(nodes);
  std::vector<Complex> spec(modes);
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  // FFTW is row-major with the last index fastest, so (z, y, x) matches the
  // x-fastest node layout and halves the x axis.
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, real.data(), cplx, flags);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n, cplx, real.data(), flags);
  if (!p.r2c || !p.c2r) throw std::runtime_error("fftw planning failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

namespace fft {

void forward(const Grid3& g, const double* in, Complex* out) {
  const PlanPair& p = plans_for(g.n);
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(g.nodes());
  const std::size_t m = g.modes();
  for (std::size_t i = 0; i < m; ++i) out[i] *= scale;
}

void inverse(const Grid3& g, const Complex* in, double* out) {
  const PlanPair& p = plans_for(g.n);
  // c2r overwrites its input.
  std::vector<Complex> scratch(in, in + g.modes());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

}  // namespace fft

template <std::size_t C>
SpectralField<C> to_spectral(const RealField<C>& f) {
  for (const auto& c : f.comp) {
    if (c.size() != f.grid.nodes()) throw std::invalid_argument("field size does not match grid");
    for (double v : c)
      if (!std::isfinite(v)) throw std::invalid_argument("to_spectral: non-finite sample");
  }
  SpectralField<C> out(f.grid);
#pragma omp parallel for schedule(static) if (C > 1)
  for (std::size_t c = 0; c < C; ++c) fft::forward(f.grid, f.comp[c].data(), out.comp[c].data());
  return out;
}

template <std::size_t C>
RealField<C> to_real(const SpectralField<C>& f) {
  RealField<C> out(f.grid);
#pragma omp parallel for schedule(static) if (C > 1)
  for (std::size_t c = 0; c < C; ++c) fft::inverse(f.grid, f.comp[c].data(), out.comp[c].data());
  return out;
}

template SpectralField<1> to_spectral(const RealField<1>&);
template SpectralField<3> to_spectral(const RealField<3>&);
template SpectralField<9> to_spectral(const RealField<9>&);
template RealField<1> to_real(const SpectralField<1>&);
template RealField<3> to_real(const SpectralField<3>&);
template RealField<9> to_real(const SpectralField<9>&);

}  // namespace lagflow
