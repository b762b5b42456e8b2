#include "lagflow/kernels/ball_sums.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lagflow/lorentz/lorentz.hpp"

namespace lagflow::kernels {

BallStencil make_strided_ball(int radius, int stride) {
  if (radius < 0 || stride < 1) throw std::invalid_argument("ball: radius >= 0 and stride >= 1 required");
  BallStencil b;
  b.radius = radius;
  b.stride = stride;
  const int r2 = radius * radius;
  const int lim = radius / stride;
  for (int c = -lim; c <= lim; ++c)
    for (int bb = -lim; bb <= lim; ++bb) {
      const int dz = c * stride, dy = bb * stride;
      const int rest = r2 - dy * dy - dz * dz;
      if (rest < 0) continue;
      const int w = static_cast<int>(std::floor(std::sqrt(double(rest)) + 1e-12));
      b.rows.push_back({dy, dz, w});
      for (int a = -lim; a <= lim; ++a) {
        const int dx = a * stride;
        if (dx * dx <= rest) b.offsets.push_back({dx, dy, dz});
      }
    }
  return b;
}

BallStencil make_ball(int radius) { return make_strided_ball(radius, 1); }

std::vector<int> dyadic_radii(int n) {
  std::vector<int> r;
  for (int v = 1; v <= n / 4; v *= 2) r.push_back(v);
  return r;
}

namespace {

inline int wrapi(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

ScalarField maximal_serial(const ScalarField& f) {
  const Grid3& g = f.grid;
  const int n = g.n;
  const auto& v = f.comp[0];
  std::vector<BallStencil> balls;
  for (int r : dyadic_radii(n)) balls.push_back(make_ball(r));

  ScalarField out(g);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double best = v[g.node(i, j, k)];
        for (const auto& b : balls) {
          double s = 0.0;
          for (const auto& o : b.offsets) s += v[g.node(wrapi(i + o[0], n), wrapi(j + o[1], n), wrapi(k + o[2], n))];
          best = std::max(best, s / double(b.offsets.size()));
        }
        out.comp[0][g.node(i, j, k)] = best;
      }
  return out;
}

ScalarField maximal_omp(const ScalarField& f) {
  const Grid3& g = f.grid;
  const int n = g.n;
  const auto& v = f.comp[0];
  std::vector<BallStencil> balls;
  for (int r : dyadic_radii(n)) balls.push_back(make_ball(r));

  // prefix[row][i] = sum of the first i entries of the x row; rows are (j, k).
  const std::size_t stride = std::size_t(n) + 1;
  std::vector<double> prefix(stride * std::size_t(n) * n);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < n * n; ++row) {
    double* p = &prefix[std::size_t(row) * stride];
    p[0] = 0.0;
    for (int i = 0; i < n; ++i) p[i + 1] = p[i] + v[std::size_t(row) * n + i];
  }
  auto segment = [&](int row, int lo, int hi) {  // inclusive x range, may wrap, length < n
    const double* p = &prefix[std::size_t(row) * stride];
    lo = wrapi(lo, n);
    hi = wrapi(hi, n);
    if (lo <= hi) return p[hi + 1] - p[lo];
    return (p[n] - p[lo]) + p[hi + 1];
  };

  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < n * n; ++row) {
    const int j = row % n, k = row / n;
    for (int i = 0; i < n; ++i) {
      double best = v[g.node(i, j, k)];
      for (const auto& b : balls) {
        double s = 0.0;
        for (const auto& r : b.rows) s += segment(wrapi(j + r[0], n) + n * wrapi(k + r[1], n), i - r[2], i + r[2]);
        best = std::max(best, s / double(b.offsets.size()));
      }
      out.comp[0][g.node(i, j, k)] = best;
    }
  }
  return out;
}

int stein_stride(int radius) {
  int s = 1;
  while (radius / s > 4) s *= 2;
  return s;
}

namespace {

std::vector<BallStencil> stein_balls(int n) {
  std::vector<BallStencil> balls;
  for (int r : dyadic_radii(n)) balls.push_back(make_strided_ball(r, stein_stride(r)));
  return balls;
}

double stein_at(const ScalarField& m, const std::vector<BallStencil>& balls, int i, int j, int k,
                std::vector<double>& scratch) {
  const Grid3& g = m.grid;
  const int n = g.n;
  const auto& v = m.comp[0];
  double best = 0.0;
  for (const auto& b : balls) {
    scratch.clear();
    for (const auto& o : b.offsets) scratch.push_back(std::abs(v[g.node(wrapi(i + o[0], n), wrapi(j + o[1], n), wrapi(k + o[2], n))]));
    std::sort(scratch.begin(), scratch.end(), std::greater<>());
    // Unit cell volume on both sides: the ratio does not depend on it.
    const double num = lorentz_norm_sorted(scratch, 1.0, 3.0, 1.0);
    best = std::max(best, num / std::cbrt(double(scratch.size())));
  }
  return best;
}

}  // namespace

ScalarField stein_serial(const ScalarField& mag) {
  const Grid3& g = mag.grid;
  const auto balls = stein_balls(g.n);
  ScalarField out(g);
  std::vector<double> scratch;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) out.comp[0][g.node(i, j, k)] = stein_at(mag, balls, i, j, k, scratch);
  return out;
}

ScalarField stein_omp(const ScalarField& mag) {
  const Grid3& g = mag.grid;
  const auto balls = stein_balls(g.n);
  ScalarField out(g);
  const int n = g.n;
#pragma omp parallel
  {
    std::vector<double> scratch;
#pragma omp for schedule(static)
    for (int row = 0; row < n * n; ++row) {
      const int j = row % n, k = row / n;
      for (int i = 0; i < n; ++i) out.comp[0][g.node(i, j, k)] = stein_at(mag, balls, i, j, k, scratch);
    }
  }
  return out;
}

}  // namespace lagflow::kernels
