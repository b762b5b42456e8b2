#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/flow/drift.hpp"
#include "lagflow/flow/forcing.hpp"
#include "lagflow/weights/weights.hpp"

namespace lagflow {

struct PicardOptions {
  double T = 1.0;
  double dt = 0.01;
  int n_iters = 10;
  /// Iterates are stored every `save_stride` quadrature steps; gaps always use every step.
  int save_stride = 1;
  /// Also integrate the reference at dt/8 and record its distance to the dt/4 one.
  bool cross_check = false;
  void validate() const;
};

/// Picard iterates Z^(n) for a single starting point x, compared with a reference
/// trajectory X(x) computed by RK4 at dt/4. Paths are unwrapped.
struct PicardRun {
  Vec3 x;
  std::vector<double> times;                // save times
  std::vector<std::vector<Vec3>> iterates;  // iterates[n][save]
  std::vector<Vec3> reference;              // X at the save times
  std::vector<double> gaps;                 // sup_t |Z^(n)_t - X_t|, n = 0..n_iters
  std::vector<double> weighted_gaps;        // sup_t e^{-e int_0^t h(X)} |Z^(n)_t - X_t| when a weight is given
  double residual = 0.0;                    // max |Z^(n+1) - F(Z^(n))| over recomputation
  double reference_check = -1.0;            // sup_t |X_{dt/4} - X_{dt/8}|, -1 when not requested
  double h_T = std::numeric_limits<double>::quiet_NaN();
  double b_sup_integral = std::numeric_limits<double>::quiet_NaN();  // int_0^T ||b_t||_{C^0} dt
};

/// Z^(0) = x + gamma and Z^(n+1)_t = x + int_0^t b_s(Z^(n)_s) ds + gamma_t with the
/// trapezoid rule on the dt grid. `weight` (snapshots of h) adds H_T(x) and the weighted gaps.
PicardRun picard_iterate(const Drift& b, const ForcingPath& gamma, const Vec3& x, const PicardOptions& opt,
                         const std::vector<TimedScalar>* weight = nullptr);

/// int_0^T ||b_t||_{C^0} dt for the time-linear interpolant of the snapshot node values.
double sup_norm_integral(const FieldDrift& b, double T);

struct PicardRate {
  bool converged_immediately = false;
  double slope = std::numeric_limits<double>::quiet_NaN();  // d log(gap_n) / dn on the fitted range
  int fit_first = 0;
  int fit_last = 0;
  double floor = 0.0;                 // gap level treated as the discretization/round-off floor
  double weighted_sup = 0.0;          // sup_n e^n gap_n over the fitted range
  double bound_rhs = std::numeric_limits<double>::quiet_NaN();  // e^{e H_T} int ||b||_{C^0}
  double contraction = std::numeric_limits<double>::quiet_NaN();  // max weighted-gap ratio on the range
  bool z0_bound_holds = true;
};

/// Fits log(gap_n) against n over the iterates that sit at least a decade above the floor.
PicardRate convergence_rate(const std::vector<double>& gaps, double scale);
PicardRate convergence_rate(const PicardRun& run);

/// Gap sequences of a whole point set (no paths stored), parallel over points.
struct PicardLattice {
  std::vector<Vec3> points;
  std::vector<std::vector<double>> gaps;  // gaps[point][n]
  double b_sup_integral = std::numeric_limits<double>::quiet_NaN();
  int n_iters = 0;
};

PicardLattice picard_lattice(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& points,
                             const PicardOptions& opt);

enum class ThresholdKind { exp_half, absolute };

struct ThresholdRule {
  ThresholdKind kind = ThresholdKind::exp_half;
  double scale = 1.0;  // exp_half: scale * e^{-n/2}; absolute: scale
  double at(int n) const;
};

struct DecayRow {
  int n = 0;
  double threshold = 0.0;
  double fraction = 0.0;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  double slope_fit = std::numeric_limits<double>::quiet_NaN();  // log fraction vs log n over 0 < fraction < 1, n >= 1
  bool non_increasing = true;
};

DecayTable bad_set_measure(const PicardLattice& lattice, const ThresholdRule& rule = {});

}  // namespace lagflow
