#include "lagflow/weights/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/seeds.hpp"
#include "lagflow/field/spectral_ops.hpp"
#include "lagflow/kernels/ball_sums.hpp"

namespace lagflow {

ScalarField maximal_function(const ScalarField& f) {
  for (double v : f.comp[0])
    if (v < 0.0) throw std::invalid_argument("maximal_function expects a non-negative field");
  return kernels::maximal_omp(f);
}

ScalarField stein_maximal(const TensorField& grad_b) { return kernels::stein_omp(magnitude(grad_b)); }

namespace {

constexpr std::size_t kPairBlock = 4096;

Vec3 node_pos(const Grid3& g, std::size_t idx) {
  const std::size_t n = g.n;
  const double h = g.spacing();
  return {double(idx % n) * h, double((idx / n) % n) * h, double(idx / (n * n)) * h};
}

double pair_ratio(const RealVectorField& b, const ScalarField& w, std::size_t x, std::size_t y) {
  const Grid3& g = b.grid;
  Vec3 d;
  for (int c = 0; c < 3; ++c) d[c] = b.comp[c][x] - b.comp[c][y];
  const double num = norm(d);
  if (num == 0.0) return 0.0;
  const double den = w.comp[0][x] * periodic_distance(node_pos(g, x), node_pos(g, y), g.box_len);
  return den > 0.0 ? num / den : kInf;
}

}  // namespace

PairSample sample_pairs(const Grid3& g, std::size_t count, std::uint64_t seed) {
  PairSample s;
  s.x.resize(count);
  s.y.resize(count);
  const std::size_t blocks = (count + kPairBlock - 1) / kPairBlock;
  const int n = g.n;
  const double h = g.spacing(), L = g.box_len;
#pragma omp parallel for schedule(static)
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::mt19937_64 rng(derive_seed(seed, blk));
    std::uniform_int_distribution<std::size_t> node(0, g.nodes() - 1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> N(0.0, 1.0);
    const std::size_t end = std::min(count, (blk + 1) * kPairBlock);
    for (std::size_t p = blk * kPairBlock; p < end; ++p) {
      const std::size_t x = node(rng);
      std::size_t y = x;
      while (y == x) {
        if (p % 2 == 0) {
          y = node(rng);
        } else {
          const double r = h * std::exp(U(rng) * std::log(0.5 * L / h));
          Vec3 dir{N(rng), N(rng), N(rng)};
          dir *= r / std::max(norm(dir), 1e-300);
          const Vec3 q = wrap(node_pos(g, x) + dir, L);
          int idx[3];
          for (int d = 0; d < 3; ++d) idx[d] = static_cast<int>(std::lround(q[d] / h)) % n;
          y = g.node(idx[0], idx[1], idx[2]);
        }
      }
      s.x[p] = x;
      s.y[p] = y;
    }
  }
  return s;
}

AsymmetricWeight asymmetric_weight(const SpectralVectorField& b, std::optional<double> c_fit, std::size_t fit_pairs,
                                   std::uint64_t seed) {
  AsymmetricWeight w;
  const TensorField grad = gradient(b);
  w.maximal = maximal_function(magnitude(grad));
  w.stein = stein_maximal(grad);
  ScalarField base(b.grid);
  for (std::size_t i = 0; i < base.comp[0].size(); ++i) base.comp[0][i] = w.maximal.comp[0][i] + w.stein.comp[0][i];

  if (c_fit) {
    if (!(*c_fit >= 0.0)) throw std::invalid_argument("c_fit must be >= 0");
    w.c = *c_fit;
  } else {
    const RealVectorField bv = to_real(b);
    const PairSample s = sample_pairs(b.grid, fit_pairs, seed);
    double c = 0.0;
    for (std::size_t p = 0; p < fit_pairs; ++p) c = std::max(c, pair_ratio(bv, base, s.x[p], s.y[p]));
    w.c = c;
    w.fitted = true;
  }
  w.h = base;
  for (double& v : w.h.comp[0]) v *= w.c;
  return w;
}

PairReport verify_asymmetric(const RealVectorField& b, const ScalarField& h, std::size_t pair_count,
                             std::uint64_t seed) {
  if (pair_count < 1) throw std::invalid_argument("verify_asymmetric: pair_count must be >= 1");
  const PairSample s = sample_pairs(b.grid, pair_count, seed);
  PairReport r;
  r.pairs = pair_count;
  for (std::size_t p = 0; p < pair_count; ++p) {
    const double q = pair_ratio(b, h, s.x[p], s.y[p]);
    r.worst_ratio = std::max(r.worst_ratio, q);
    // exact ties are not violations; the fitted constant attains equality on its sample
    if (q > 1.0 + 1e-12) ++r.violations;
  }
  r.violation_fraction = double(r.violations) / double(r.pairs);
  return r;
}

namespace {

void check_alignment(const std::vector<TimedScalar>& h, const ParticleEnsemble& e) {
  if (h.empty()) throw std::invalid_argument("flow_weight: no weight snapshots");
  if (h.size() == 1) return;
  if (h.size() != e.times.size()) throw std::invalid_argument("flow_weight: weight and save times misaligned");
  for (std::size_t s = 0; s < h.size(); ++s)
    if (std::abs(h[s].t - e.times[s]) > 1e-9 * std::max(1.0, e.times.back()))
      throw std::invalid_argument("flow_weight: weight and save times misaligned");
}

double weight_at(const std::vector<TimedScalar>& h, const ParticleEnsemble& e, std::size_t s, std::size_t i) {
  const ScalarField& f = h.size() == 1 ? h[0].f : h[s].f;
  return sample_trilinear(f, e.positions[s][i]);
}

}  // namespace

std::vector<double> flow_weight(const std::vector<TimedScalar>& h, const ParticleEnsemble& e) {
  check_alignment(h, e);
  std::vector<double> H(e.size(), 0.0);
  const std::ptrdiff_t N = static_cast<std::ptrdiff_t>(e.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < N; ++i) {
    double acc = 0.0;
    double prev = weight_at(h, e, 0, i);
    for (std::size_t s = 1; s < e.times.size(); ++s) {
      const double cur = weight_at(h, e, s, i);
      acc += 0.5 * (e.times[s] - e.times[s - 1]) * (prev + cur);
      prev = cur;
    }
    H[i] = acc;
  }
  return H;
}

std::vector<double> flow_weight_path(const std::vector<TimedScalar>& h, const ParticleEnsemble& e,
                                     std::size_t particle) {
  check_alignment(h, e);
  std::vector<double> out(e.times.size(), 0.0);
  for (std::size_t s = 1; s < e.times.size(); ++s)
    out[s] = out[s - 1] + 0.5 * (e.times[s] - e.times[s - 1]) *
                              (weight_at(h, e, s - 1, particle) + weight_at(h, e, s, particle));
  return out;
}

PairReport check_flow_lipschitz(const ParticleEnsemble& e, const std::vector<double>& H, std::size_t pair_count,
                                std::uint64_t seed) {
  const int m = e.m;
  if (m < 2) throw std::invalid_argument("check_flow_lipschitz needs a lattice ensemble");
  if (H.size() != e.size()) throw std::invalid_argument("check_flow_lipschitz: weight size mismatch");
  const double L = e.box_len;
  auto id = [m](int i, int j, int k) {
    auto w = [m](int a) { return ((a % m) + m) % m; };
    return std::size_t(w(i)) + std::size_t(m) * (std::size_t(w(j)) + std::size_t(m) * std::size_t(w(k)));
  };
  const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const std::size_t total = e.size() * 6;
  std::vector<std::size_t> chosen;
  if (pair_count == 0 || pair_count >= total) {
    chosen.resize(total);
    for (std::size_t p = 0; p < total; ++p) chosen[p] = p;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> U(0, total - 1);
    chosen.resize(pair_count);
    for (auto& c : chosen) c = U(rng);
  }

  PairReport r;
  r.pairs = chosen.size();
  for (std::size_t p : chosen) {
    const std::size_t xi = p / 6;
    const int* d = dirs[p % 6];
    const int i = int(xi % m), j = int((xi / m) % m), k = int(xi / (std::size_t(m) * m));
    const std::size_t yi = id(i + d[0], j + d[1], k + d[2]);
    double sup = 0.0;
    for (const auto& save : e.positions) sup = std::max(sup, periodic_distance(save[xi], save[yi], L));
    const double base = periodic_distance(e.initial[xi], e.initial[yi], L);
    const double q = sup / (std::exp(H[xi]) * base);
    r.worst_ratio = std::max(r.worst_ratio, q);
    if (q > 1.0 + 1e-12) ++r.violations;
  }
  r.violation_fraction = r.pairs ? double(r.violations) / double(r.pairs) : 0.0;
  return r;
}

WeakTailReport weak_tail_check(const std::vector<double>& H, double budget, double box_volume) {
  WeakTailReport r;
  r.budget = budget;
  if (H.empty()) return r;
  std::vector<double> s(H);
  std::sort(s.begin(), s.end(), std::greater<>());
  const double N = double(s.size());
  // sup over levels is attained just below each distinct value
  for (std::size_t k = 0; k < s.size(); ++k)
    r.quasi_norm = std::max(r.quasi_norm, s[k] * std::cbrt(double(k + 1) / N * box_volume));
  r.ratio = budget > 0.0 ? r.quasi_norm / budget : (r.quasi_norm == 0.0 ? 0.0 : kInf);

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    if (s[k] == s[k + 1] || s[k + 1] <= 0.0) continue;
    const double frac = double(k + 1) / N;  // fraction with H > s[k+1]
    if (frac < 1e-3 || frac > 0.1) continue;
    xs.push_back(s[k + 1]);
    ys.push_back(frac);
  }
  r.fit_points = xs.size();
  if (xs.size() >= 2 && xs.front() != xs.back()) r.slope = loglog_slope(xs, ys);
  return r;
}

}  // namespace lagflow
