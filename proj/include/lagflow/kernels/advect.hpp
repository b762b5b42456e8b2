#pragma once

#include <vector>

#include "lagflow/flow/flow.hpp"

namespace lagflow::kernels {

/// One step of the chosen scheme for dY/dt = v(t, Y).
template <typename V>
Vec3 advance(const V& v, double t, const Vec3& y, double h, TimeScheme scheme) {
  if (scheme == TimeScheme::euler) return y + h * v(t, y);
  const Vec3 k1 = v(t, y);
  const Vec3 k2 = v(t + 0.5 * h, y + 0.5 * h * k1);
  const Vec3 k3 = v(t + 0.5 * h, y + 0.5 * h * k2);
  const Vec3 k4 = v(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Reference implementation: particles one after another.
ParticleEnsemble advect_serial(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                               const FlowOptions& opt);

/// Parallel over particles; bit-identical to the serial kernel.
ParticleEnsemble advect_omp(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                            const FlowOptions& opt);

}  // namespace lagflow::kernels
