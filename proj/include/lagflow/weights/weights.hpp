#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lagflow/field/field.hpp"
#include "lagflow/flow/flow.hpp"

namespace lagflow {

/// Discrete Hardy-Littlewood maximal function over dyadic balls; f must be >= 0.
ScalarField maximal_function(const ScalarField& f);

/// Stein-type maximal function of |grad b| (Frobenius) over the same radii.
ScalarField stein_maximal(const TensorField& grad_b);

struct AsymmetricWeight {
  ScalarField h;        // c (M|grad b| + g)
  ScalarField maximal;  // M|grad b|
  ScalarField stein;    // g
  double c = 1.0;
  bool fitted = false;
};

struct PairReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  double worst_ratio = 0.0;  // max |b(x)-b(y)| / (h(x)|x-y|)
};

/// Pair design: x uniform over nodes; half of the y uniform over nodes, half at
/// log-uniform distances in [h, L/2] rounded to a node. Deterministic in seed.
struct PairSample {
  std::vector<std::size_t> x, y;
};
PairSample sample_pairs(const Grid3& g, std::size_t count, std::uint64_t seed);

/// h = c (M|grad b| + g). Without c_fit, c is the smallest constant that makes
/// every pair of a `fit_pairs` sample satisfy the inequality.
AsymmetricWeight asymmetric_weight(const SpectralVectorField& b, std::optional<double> c_fit,
                                   std::size_t fit_pairs = 100000, std::uint64_t seed = 1);

/// Checks |b(x) - b(y)| <= h(x) |x - y| on a fresh sample.
PairReport verify_asymmetric(const RealVectorField& b, const ScalarField& h, std::size_t pair_count,
                             std::uint64_t seed);

struct TimedScalar {
  double t = 0.0;
  ScalarField f;
};

/// H_T(x) = int_0^T h_s(X_s(x)) ds by the trapezoid rule over the save times,
/// trilinear in space. A single weight snapshot is frozen in time; otherwise
/// the snapshot times must equal the save times.
std::vector<double> flow_weight(const std::vector<TimedScalar>& h, const ParticleEnsemble& e);

/// Running integral H_t at every save time for one particle.
std::vector<double> flow_weight_path(const std::vector<TimedScalar>& h, const ParticleEnsemble& e,
                                     std::size_t particle);

/// Nearest-neighbour lattice pairs (both orders, six per point, or a seeded
/// subset of pair_count): sup_t |X_t(x) - X_t(y)| <= e^{H(x)} |x - y|.
PairReport check_flow_lipschitz(const ParticleEnsemble& e, const std::vector<double>& H, std::size_t pair_count = 0,
                                std::uint64_t seed = 1);

struct WeakTailReport {
  double quasi_norm = 0.0;  // sup_a a |{H > a}|^{1/3}, box measure
  double budget = 0.0;
  double ratio = 0.0;
  double slope = 0.0;       // log-log slope of the survival function
  std::size_t fit_points = 0;
};

/// Survival slope fitted where the surviving fraction lies in [1e-3, 0.1].
WeakTailReport weak_tail_check(const std::vector<double>& H, double budget, double box_volume);

}  // namespace lagflow
