#include "lagflow/flow/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lagflow/field/fft.hpp"

namespace lagflow {

FieldDrift::FieldDrift(std::vector<Snapshot> snapshots, SampleMode mode, int refine)
    : snaps_(std::move(snapshots)), mode_(mode) {
  if (snaps_.empty()) throw std::invalid_argument("FieldDrift needs at least one snapshot");
  for (std::size_t i = 1; i < snaps_.size(); ++i) {
    if (!(snaps_[i].t > snaps_[i - 1].t)) throw std::invalid_argument("FieldDrift snapshot times must increase");
    if (!(snaps_[i].u.grid == snaps_[0].u.grid)) throw std::invalid_argument("FieldDrift snapshots on mixed grids");
  }
  grid_ = snaps_[0].u.grid;
  if (mode_ == SampleMode::trilinear) {
    nodes_.reserve(snaps_.size());
    for (const auto& s : snaps_) nodes_.push_back(to_real(refine > 1 ? upsample(s.u, refine) : s.u));
  }
}

Vec3 FieldDrift::velocity(double t, const Vec3& z) const {
  auto sample = [&](std::size_t i) {
    return mode_ == SampleMode::spectral ? sample_spectral(snaps_[i].u, z) : sample_trilinear(nodes_[i], z);
  };
  if (snaps_.size() == 1) return sample(0);
  const double t0 = snaps_.front().t, t1 = snaps_.back().t;
  const double tol = 1e-9 * std::max(1.0, std::abs(t1));
  if (t < t0 - tol || t > t1 + tol) throw std::out_of_range("drift evaluated outside its time range");
  t = std::clamp(t, t0, t1);
  auto it = std::upper_bound(snaps_.begin(), snaps_.end(), t, [](double v, const Snapshot& s) { return v < s.t; });
  std::size_t hi = std::min<std::size_t>(it - snaps_.begin(), snaps_.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double w = (t - snaps_[lo].t) / (snaps_[hi].t - snaps_[lo].t);
  if (w <= 0.0) return sample(lo);
  if (w >= 1.0) return sample(hi);
  return (1.0 - w) * sample(lo) + w * sample(hi);
}

}  // namespace lagflow
