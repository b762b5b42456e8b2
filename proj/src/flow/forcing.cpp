#include "lagflow/flow/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lagflow/field/seeds.hpp"

namespace lagflow {

namespace {

ForcingPath empty_path(double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("forcing path: T and dt must be > 0");
  ForcingPath p;
  const long steps = std::max(1L, std::lround(T / dt));
  p.T = T;
  p.dt = T / double(steps);
  p.values.assign(steps + 1, Vec3{});
  return p;
}

}  // namespace

Vec3 ForcingPath::at(double t) const {
  const double tol = 1e-9 * std::max(1.0, T);
  if (values.empty() || t < -tol || t > T + tol) throw std::out_of_range("forcing path evaluated outside [0, T]");
  const double s = std::clamp(t, 0.0, T) / dt;
  std::size_t i = static_cast<std::size_t>(s);
  if (i >= values.size() - 1) return values.back();
  const double w = s - double(i);
  if (w == 0.0) return values[i];
  return (1.0 - w) * values[i] + w * values[i + 1];
}

std::uint64_t ForcingPath::hash() const {
  std::uint64_t h = fnv1a_bytes(&T, sizeof T);
  h = fnv1a_bytes(&dt, sizeof dt, h);
  return fnv1a_bytes(values.data(), values.size() * sizeof(Vec3), h);
}

ForcingPath zero_path(double T, double dt) { return empty_path(T, dt); }

ForcingPath sample_brownian(double T, double dt, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("brownian path: epsilon must be >= 0");
  ForcingPath p = empty_path(T, dt);
  p.kind = ForcingKind::brownian;
  p.epsilon = epsilon;
  p.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = epsilon * std::sqrt(p.dt);
  for (std::size_t i = 1; i < p.values.size(); ++i) {
    Vec3 inc;
    for (int d = 0; d < 3; ++d) inc[d] = sd * normal(rng);
    p.values[i] = p.values[i - 1] + inc;
  }
  return p;
}

ForcingPath custom_path(double T, double dt, const std::function<Vec3(double)>& g) {
  ForcingPath p = empty_path(T, dt);
  p.kind = ForcingKind::custom;
  for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = g(double(i) * p.dt);
  return p;
}

ForcingPath combine(double a, const ForcingPath& p, double b, const ForcingPath& q) {
  if (p.values.size() != q.values.size() || std::abs(p.T - q.T) > 1e-12 * std::max(1.0, p.T))
    throw std::invalid_argument("combine: forcing paths on different grids");
  ForcingPath r = p;
  r.kind = ForcingKind::custom;
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a * p.values[i] + b * q.values[i];
  return r;
}

ForcingPath shifted(const ForcingPath& p, const Vec3& c) {
  ForcingPath r = p;
  r.kind = ForcingKind::custom;
  for (auto& v : r.values) v += c;
  return r;
}

double sup_distance(const ForcingPath& p, const ForcingPath& q) {
  const double T = std::min(p.T, q.T);
  double best = 0.0;
  for (const ForcingPath* grid : {&p, &q}) {
    for (std::size_t i = 0; i < grid->values.size(); ++i) {
      const double t = std::min(double(i) * grid->dt, T);
      best = std::max(best, norm(p.at(t) - q.at(t)));
    }
  }
  return best;
}

}  // namespace lagflow
