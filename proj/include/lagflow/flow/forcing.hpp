#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lagflow/field/vec3.hpp"

namespace lagflow {

enum class ForcingKind { zero, brownian, custom };

/// Continuous forcing path on [0, T], piecewise linear between uniform samples.
struct ForcingPath {
  double T = 0.0;
  double dt = 0.0;
  std::vector<Vec3> values;  // values[i] = gamma(i * dt), values[0] stored explicitly
  ForcingKind kind = ForcingKind::zero;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
  /// Linear interpolation; throws std::out_of_range outside [0, T].
  Vec3 at(double t) const;
  /// FNV-1a over the sample bytes and the time grid.
  std::uint64_t hash() const;
};

ForcingPath zero_path(double T, double dt);

/// gamma_0 = 0 and independent N(0, epsilon^2 dt) increments per component.
ForcingPath sample_brownian(double T, double dt, double epsilon, std::uint64_t seed);

/// Samples a user function on the uniform grid.
ForcingPath custom_path(double T, double dt, const std::function<Vec3(double)>& g);

/// a*p + b*q on a common grid (throws if the grids differ).
ForcingPath combine(double a, const ForcingPath& p, double b, const ForcingPath& q);

/// p + c for a constant vector c.
ForcingPath shifted(const ForcingPath& p, const Vec3& c);

/// sup_t |p(t) - q(t)| (exact for piecewise-linear paths on any two grids).
double sup_distance(const ForcingPath& p, const ForcingPath& q);

}  // namespace lagflow
