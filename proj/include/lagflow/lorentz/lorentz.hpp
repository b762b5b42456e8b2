#pragma once

#include <limits>
#include <span>
#include <vector>

#include "lagflow/field/field.hpp"

namespace lagflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Decreasing rearrangement of |f| over the nodes, each node carrying cell_volume.
struct EmpiricalDistribution {
  std::vector<double> sorted_magnitudes;
  double cell_volume = 0.0;

  /// Measure of {|f| > r}.
  double measure_above(double r) const;
};

EmpiricalDistribution make_distribution(std::span<const double> values, double cell_volume);
EmpiricalDistribution make_distribution(const ScalarField& f);

/// Lorentz quasi-norm without a leading prefactor:
///   ||f||_{p,q}^q = int_0^inf r^{q-1} |{|f| > r}|^{q/p} dr,
///   ||f||_{p,inf} = sup_r r |{|f| > r}|^{1/p}.
/// Exact for piecewise-constant grid functions. q may be kInf.
double lorentz_norm(const EmpiricalDistribution& d, double p, double q);
double lorentz_norm(const ScalarField& f, double p, double q);
/// Same quantity on a descending-sorted magnitude list (no copy, no sort).
double lorentz_norm_sorted(std::span<const double> desc, double cell_volume, double p, double q);

/// ||1_{B_r}||_{L^{3,1}} = c_3 r under the prefactor-free convention.
double ball_indicator_constant();

/// Explicit constant of the Lorentz interpolation inequality
///   ||f||_{p_theta,1} <= C ||f||_{p0,inf}^{1-theta} ||f||_{p1,inf}^theta.
double interpolation_constant(double p0, double p1, double theta);

/// 1/p_theta = (1-theta)/p0 + theta/p1.
double interpolated_exponent(double p0, double p1, double theta);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool passed = true;
};

/// ratio = lhs/rhs, with 0/0 read as 0; passed when ratio <= 1 + tolerance.
InequalityReport make_report(double lhs, double rhs, double tolerance = 0.0);

InequalityReport check_lorentz_interpolation(const ScalarField& f, double p0, double p1, double theta);

/// Raw ratio ||f||_{3,1} / (||f||_{L2}^{1/2} ||grad f||_{L2}^{1/2}); no constant is
/// assumed, so `passed` only certifies a finite ratio.
InequalityReport check_refined_inequality(const SpectralScalarField& f);

struct WeakSplit {
  ScalarField small;
  ScalarField large;
  double weak_norm = 0.0;     // ||f||_{p,inf}
  double threshold = 0.0;     // delta * ||f||_{p,inf}
  double small_sup = 0.0;
  double large_lq = 0.0;      // ||f_large||_{L^q}
  double scaled_large = 0.0;  // ||f_large||_{L^q} delta^{p/q-1} / ||f||_{p,inf}
  bool small_bound_holds = true;
};

/// f = f_small + f_large with f_small = f 1_{|f| <= delta ||f||_{p,inf}}.
WeakSplit split_weak_lp(const ScalarField& f, double p, double delta, double q);

struct AgmonReport {
  InequalityReport chain;  // lhs = ||f||_{FL1}, rhs = ||f||_{s0}^{1-theta} ||f||_{s1}^theta
  double sup_norm = 0.0;
  double theta = 0.0;
  double cutoff = 0.0;     // M = (||f||_{s1}/||f||_{s0})^{1/(s1-s0)}
  double low = 0.0;        // sum of |c_k| over |k| <= M
  double high = 0.0;
  double low_bound = 0.0;  // Cauchy-Schwarz bounds on the two parts
  double high_bound = 0.0;
  bool sup_dominated = true;
  bool split_holds = true;
};

AgmonReport check_agmon(const SpectralVectorField& f, double s0, double s1);

}  // namespace lagflow
