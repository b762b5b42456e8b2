#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagflow/solver/solver.hpp"

namespace lagflow::harness {

/// Parse or validation failure; the message carries the line number when one applies.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverSection {
  double nu = 0.05;
  double dt = 0.01;
  double t_end = 1.0;
  int n_moll = 0;
  bool dealias = true;
  int n = 32;
  double box_len = 6.283185307179586;
  int snapshot_count = 20;
  int max_halvings = 12;
  std::string initial = "taylor_green";
  double amplitude = 1.0;
  double energy = -1.0;
  double k_min = 1.0;
  double k_max = 4.0;
  double slope = 1.0;
  int mode = 1;
  bool operator==(const SolverSection&) const = default;
};

struct FlowSection {
  int m = 32;
  std::string scheme = "rk4";
  double dt = 0.01;
  double T = 0.5;
  double epsilon = 0.0;
  bool operator==(const FlowSection&) const = default;
};

struct WeightsSection {
  int pair_count = 100000;
  int fit_pairs = 100000;
  /// 0 fits the constant on a training sample.
  double c = 0.0;
  bool operator==(const WeightsSection&) const = default;
};

struct NormsSection {
  int fields = 200;
  double k_max = 8.0;
  bool operator==(const NormsSection&) const = default;
};

struct StabilitySection {
  std::vector<int> n_moll{1, 2, 4, 8};
  double p = 2.0;
  int m = 16;
  bool operator==(const StabilitySection&) const = default;
};

struct PicardSection {
  int n_iters = 10;
  int m = 32;
  double T = 1.0;
  double dt = 0.02;
  std::string threshold = "exp_half";
  double threshold_scale = 1.0;
  bool operator==(const PicardSection&) const = default;
};

struct ProbeSection {
  int m = 16;
  int seeds = 2;
  double T = 1.0;
  double dt = 0.02;
  /// 0 applies the 10 dt rule at every refinement level.
  double tol = 0.0;
  int halvings = 2;
  std::vector<double> epsilons{0.05, 0.2};
  std::string drift = "navier_stokes";
  double control_c = 2.0;
  bool operator==(const ProbeSection&) const = default;
};

struct ExperimentConfig {
  SolverSection solver;
  FlowSection flow;
  WeightsSection weights;
  NormsSection norms;
  StabilitySection stability;
  PicardSection picard;
  ProbeSection probe;
  std::string output_dir = "lagflow_out";
  std::uint64_t master_seed = 1;
  bool operator==(const ExperimentConfig&) const = default;

  SolverConfig solver_config() const;
  /// Checks every section against the preconditions of the stage that consumes it.
  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);
/// Every key, one per line, in a form parse_config_text reads back unchanged.
std::string serialize(const ExperimentConfig& cfg);
/// FNV-1a of the serialized form with output_dir left out.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace lagflow::harness
