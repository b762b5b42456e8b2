#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagflow/flow/flow.hpp"
#include "lagflow/harness/config.hpp"
#include "lagflow/solver/solver.hpp"
#include "lagflow/weights/weights.hpp"

namespace lagflow::harness {

inline constexpr const char* kVerdictPass = "pass";
inline constexpr const char* kVerdictFail = "fail";
inline constexpr const char* kVerdictSkipped = "skipped";

/// One acceptance criterion as judged by this run.
struct SummaryRow {
  int criterion = 0;
  std::string name;
  double measured = 0.0;
  std::string threshold;
  std::string verdict = kVerdictSkipped;
};

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::string status;  // "ok" or "failed"
};

struct ArtifactRecord {
  std::string file;
  std::uintmax_t bytes = 0;
  std::uint64_t checksum = 0;  // FNV-1a of the file bytes
};

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string version;
  std::vector<ArtifactRecord> files;
  std::vector<StageRecord> stages;
  std::vector<SummaryRow> summary;  // criteria 1..10, missing ones "skipped"
  bool complete = false;
  std::string error;
};

/// Stage names accepted by Pipeline::run_stage.
const std::vector<std::string>& stage_names();

/// Runs stages against one configuration, computing prerequisites on demand and
/// writing every artifact under cfg.output_dir.
class Pipeline {
 public:
  explicit Pipeline(ExperimentConfig cfg);
  ~Pipeline();

  /// Throws std::runtime_error naming the stage when it fails; the partial
  /// manifest is written before the exception leaves.
  void run_stage(const std::string& name);
  /// Writes summary.csv and manifest.json (atomically) and returns the manifest.
  RunManifest finish();

  const ExperimentConfig& config() const { return cfg_; }

 private:
  struct State;
  void solve();
  void verify_norms();
  void weights();
  void advect();
  void stability();
  void picard();
  void probe();
  void formats();
  void ensure(const std::string& name);
  void write_csv(const std::string& file, const std::string& text);
  void write_binary_record(const std::string& file);
  void set_row(SummaryRow row);
  RunManifest manifest(bool complete, const std::string& error) const;
  void write_manifest(const RunManifest& m) const;

  ExperimentConfig cfg_;
  std::filesystem::path dir_;
  std::unique_ptr<State> st_;
};

/// Every stage in order, then finish().
RunManifest pipeline_paper_check(const ExperimentConfig& cfg);

struct Summary {
  std::string text;   // aligned human-readable table
  std::string table;  // CSV: criterion, name, measured, threshold, verdict
  bool all_pass = true;
};

Summary emit_summary(const RunManifest& m);

/// A verdict counts as passing unless it is "fail" or a failed expected-fail control.
bool verdict_passes(const std::string& verdict);

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

}  // namespace lagflow::harness
