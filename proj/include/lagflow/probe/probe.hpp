#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lagflow/flow/drift.hpp"
#include "lagflow/flow/forcing.hpp"

namespace lagflow {

struct ProbeOptions {
  double T = 1.0;
  double dt = 0.01;  // must divide T into an even number of steps
  /// Branching tolerance; values <= 0 select 10 * dt.
  double tol = 0.0;
  int picard_iters = 10;
  /// Amplitude of the bump sin(pi t / T) added to the second Picard start.
  double perturbation = 0.1;
  double tolerance() const { return tol > 0.0 ? tol : 10.0 * dt; }
  void validate() const;
};

/// Numerical stand-ins for distinct solutions of the integral equation at one x,
/// all driven by the same forcing bytes. Paths are unwrapped and sampled every 2 dt.
struct CandidateSet {
  Vec3 x;
  std::uint64_t gamma_id = 0;  // forcing seed
  std::uint64_t gamma_hash = 0;
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<Vec3>> candidates;
  std::vector<std::string> excluded;  // non-finite members
  double spread = 0.0;                // max pairwise sup distance
};

CandidateSet multi_scheme_solutions(const Drift& b, const ForcingPath& gamma, const Vec3& x, const ProbeOptions& opt);

struct ProbeRow {
  std::size_t x_index = 0;
  std::uint64_t seed = 0;
  double spread = 0.0;
  double tol = 0.0;
  double dt = 0.0;
  bool passed = true;
};

struct UniquenessReport {
  std::vector<ProbeRow> rows;
  double fraction = 0.0;                 // share of (x, seed) rows with spread > tol
  std::vector<double> per_seed_fraction; // over x, one entry per seed
  std::vector<double> per_x_fraction;    // over seeds, one entry per x
  double tol = 0.0;
  double dt = 0.0;
  std::size_t excluded_members = 0;
};

/// Deterministic probe over a point set at a fixed forcing path (seed recorded as 0).
UniquenessReport ae_uniqueness_probe(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& points,
                                     const ProbeOptions& opt);

/// One Brownian path of size epsilon per seed, sampled on a grid of spacing `path_dt`
/// (0 selects opt.dt) so that dt refinements reuse the same realization.
UniquenessReport sde_uniqueness_probe(const Drift& b, double epsilon, const std::vector<Vec3>& points,
                                      const std::vector<std::uint64_t>& seeds, const ProbeOptions& opt,
                                      double path_dt = 0.0);

/// b(z) = c sign(z1 - L/2) |z1 - L/2|^{1/2} e1, frozen.
FunctionDrift sqrt_singularity_drift(double c, double box_len);

/// Points of an m x m lattice on the plane z1 = L/2.
std::vector<Vec3> singular_plane_points(int m, double box_len);

}  // namespace lagflow
