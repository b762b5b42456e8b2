#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <string>
#include <utility>
#include <vector>

#include "lagflow/field/vec3.hpp"
#include "lagflow/flow/drift.hpp"
#include "lagflow/flow/forcing.hpp"

namespace lagflow {

enum class TimeScheme { rk4, euler };

TimeScheme parse_scheme(const std::string& s);

struct FlowOptions {
  double T = 0.5;
  double dt = 0.01;
  TimeScheme scheme = TimeScheme::rk4;
  /// Save every `save_stride` steps (the final time is always saved).
  int save_stride = 1;
};

/// Initial points and the flow X_t(x) at the save times.
struct ParticleEnsemble {
  std::vector<Vec3> initial;
  std::vector<double> times;
  std::vector<std::vector<Vec3>> positions;  // positions[save][particle]
  int m = 0;                                 // lattice points per axis, 0 for a list
  double box_len = 0.0;

  std::size_t size() const { return initial.size(); }
  const std::vector<Vec3>& final_positions() const { return positions.back(); }
};

/// Cell-centred lattice (i + 1/2) L/m.
std::vector<Vec3> lattice_points(int m, double box_len);

/// Integrates Y_t = X_t - gamma_t against the shifted drift b_t(Y + gamma_t) and
/// returns X = Y + gamma, wrapped. Throws std::runtime_error on a non-finite velocity.
ParticleEnsemble integrate_flow(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                                const FlowOptions& opt);

/// Same as integrate_flow for an m^3 lattice; records m.
ParticleEnsemble integrate_lattice(const Drift& b, const ForcingPath& gamma, int m, const FlowOptions& opt);

/// Max over c^3 bins of the final-position count divided by the mean count.
/// c = 0 selects m/4.
double compressibility_constant(const ParticleEnsemble& e, int bins_per_axis = 0);

/// Per-particle sup over common save times of the periodic distance.
std::vector<double> sup_gaps(const ParticleEnsemble& a, const ParticleEnsemble& b);

struct StabilityReport {
  double lambda = 0.0;
  double lhs = 0.0;             // (mean_x min(1, sup_t |X1 - X2|)^p)^{1/p}
  double drift_gap = 0.0;       // int_0^T ||b1 - b2||_{L^p} dt
  double forcing_gap = 0.0;     // sup_t |gamma1 - gamma2|
  double gradient_budget = 0.0; // int_0^T ||grad b1||_{L^p} dt
  double rhs = 0.0;             // e^lambda (drift_gap + forcing_gap) + gradient_budget / lambda
  double lambda_opt = 0.0;
  double rhs_opt = 0.0;
  double fitted_constant = 0.0; // lhs / rhs_opt
};

/// L^p norms use the normalized uniform measure on the box.
StabilityReport stability_gap(const FieldDrift& b1, const ForcingPath& g1, const FieldDrift& b2, const ForcingPath& g2,
                              const std::vector<Vec3>& x0, const FlowOptions& opt, double lambda, double p);

/// Minimizes e^lambda A + B / lambda over lambda > 0; returns {lambda, value}.
std::pair<double, double> optimize_lambda(double A, double B);

/// int_0^T ||f_t||_{L^p} dt over a snapshot sequence (normalized measure, trapezoid);
/// a single snapshot is a frozen field. `gradient` integrates |grad f| instead.
double time_integrated_lp(const std::vector<Snapshot>& s, double T, double p, bool gradient);

/// (mean_x sup_t |X^n - X|^p)^{1/p} for each member of the sequence.
std::vector<double> flow_convergence_test(const std::vector<const Drift*>& b_seq,
                                          const std::vector<ForcingPath>& gamma_seq, const Drift& b_limit,
                                          const ForcingPath& gamma_limit, const std::vector<Vec3>& x0,
                                          const FlowOptions& opt, double p);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lagflow
