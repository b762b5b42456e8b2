#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "lagflow/field/field.hpp"
#include "lagflow/field/spectral_ops.hpp"
#include "lagflow/field/vec3.hpp"
#include "lagflow/flow/forcing.hpp"
#include "lagflow/solver/solver.hpp"

namespace lagflow {

/// Time-dependent velocity field b_t(z).
class Drift {
 public:
  virtual ~Drift() = default;
  virtual Vec3 velocity(double t, const Vec3& z) const = 0;
  /// Periodic box side; 0 for the unbounded domain.
  virtual double box_len() const = 0;
};

/// Snapshot sequence, linear in time between snapshots. A single snapshot is a
/// frozen field valid at every time.
class FieldDrift final : public Drift {
 public:
  /// `refine` > 1 upsamples spectrally before trilinear sampling.
  FieldDrift(std::vector<Snapshot> snapshots, SampleMode mode = SampleMode::trilinear, int refine = 1);

  Vec3 velocity(double t, const Vec3& z) const override;
  double box_len() const override { return grid_.box_len; }

  const std::vector<Snapshot>& snapshots() const { return snaps_; }
  const Grid3& grid() const { return grid_; }
  SampleMode mode() const { return mode_; }
  /// Node values used by trilinear sampling (after refinement).
  const std::vector<RealVectorField>& node_values() const { return nodes_; }
  double t_begin() const { return snaps_.front().t; }
  double t_end() const { return snaps_.back().t; }

 private:
  std::vector<Snapshot> snaps_;
  std::vector<RealVectorField> nodes_;
  Grid3 grid_;
  SampleMode mode_;
};

/// b^gamma_t(z) = b_t(z + gamma_t). Holds references; both must outlive it.
class ShiftedDrift final : public Drift {
 public:
  ShiftedDrift(const Drift& b, const ForcingPath& gamma) : b_(b), gamma_(gamma) {}
  Vec3 velocity(double t, const Vec3& z) const override {
    return b_.velocity(t, wrap(z + gamma_.at(t), b_.box_len()));
  }
  double box_len() const override { return b_.box_len(); }

 private:
  const Drift& b_;
  const ForcingPath& gamma_;
};

class ConstantDrift final : public Drift {
 public:
  ConstantDrift(const Vec3& v, double box_len) : v_(v), L_(box_len) {}
  Vec3 velocity(double, const Vec3&) const override { return v_; }
  double box_len() const override { return L_; }

 private:
  Vec3 v_;
  double L_;
};

/// b(z) = A z on the unbounded domain.
class LinearDrift final : public Drift {
 public:
  explicit LinearDrift(const std::array<std::array<double, 3>, 3>& A) : A_(A) {}
  Vec3 velocity(double, const Vec3& z) const override {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = A_[i][0] * z.x + A_[i][1] * z.y + A_[i][2] * z.z;
    return r;
  }
  double box_len() const override { return 0.0; }
  const std::array<std::array<double, 3>, 3>& matrix() const { return A_; }

 private:
  std::array<std::array<double, 3>, 3> A_;
};

class FunctionDrift final : public Drift {
 public:
  FunctionDrift(std::function<Vec3(double, const Vec3&)> f, double box_len) : f_(std::move(f)), L_(box_len) {}
  Vec3 velocity(double t, const Vec3& z) const override { return f_(t, z); }
  double box_len() const override { return L_; }

 private:
  std::function<Vec3(double, const Vec3&)> f_;
  double L_;
};

}  // namespace lagflow
