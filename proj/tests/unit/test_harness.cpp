#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lagflow/field/seeds.hpp"
#include "lagflow/harness/config.hpp"
#include "lagflow/harness/csv.hpp"
#include "lagflow/harness/pipeline.hpp"

using namespace lagflow;
using namespace lagflow::harness;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(const std::string& dir) {
  ExperimentConfig c = parse_config(fs::path(LAGFLOW_SOURCE_DIR) / "configs" / "smoke.cfg");
  c.output_dir = (fs::temp_directory_path() / dir).string();
  fs::remove_all(c.output_dir);
  return c;
}

const SummaryRow& row(const RunManifest& m, int criterion) {
  for (const auto& r : m.summary)
    if (r.criterion == criterion) return r;
  throw std::logic_error("missing row");
}

}  // namespace

TEST_CASE("config parsing") {
  CHECK(parse_config_text("") == ExperimentConfig{});
  CHECK(parse_config_text("# only a comment\n\n") == ExperimentConfig{});
  CHECK(error_of("solver.nu = -1").find("nu must be > 0") != std::string::npos);
  const auto unknown = error_of("solver.nu = 0.1\nsolver.viscosity = 2\n");
  CHECK(unknown.find("line 2") != std::string::npos);
  CHECK(unknown.find("solver.viscosity") != std::string::npos);
  const auto type = error_of("\n\nflow.m = twelve");
  CHECK(type.find("line 3") != std::string::npos);
  CHECK(type.find("integer") != std::string::npos);
  CHECK(error_of("solver.n = 24").find("power of two") != std::string::npos);
  CHECK(error_of("flow.T = 3").find("flow.T") != std::string::npos);
  CHECK(error_of("probe.drift = wild").find("probe.drift") != std::string::npos);
  CHECK(error_of("no equals sign").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/lagflow.cfg"), ConfigError);

  auto c = parse_config_text(
      "solver.nu = 0.02\nsolver.initial = random_band\nsolver.energy = 3.5\nstability.n_moll = 2, 3\n"
      "probe.epsilons = 0.1\nmaster_seed = 18446744073709551615\nsolver.dealias = false\n");
  CHECK(c.solver.nu == 0.02);
  CHECK(c.stability.n_moll == std::vector<int>{2, 3});
  CHECK(c.master_seed == 18446744073709551615ull);
  CHECK_FALSE(c.solver.dealias);
  CHECK(parse_config_text(serialize(c)) == c);
  CHECK(serialize(parse_config_text(serialize(c))) == serialize(c));
  CHECK(config_hash(c) != config_hash(ExperimentConfig{}));
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b"});
  t.row() << 1 << 0.5;
  t.row() << "x" << true;
  CHECK(t.str() == "a,b\n1,0.5\nx,true\n");
  CHECK(t.rows() == 2);
  auto r = t.row();
  r << 1.0;
  CHECK_THROWS_AS(t.str(), std::logic_error);
  CHECK_THROWS_AS(CsvTable({"a"}).row() << "has,comma", std::invalid_argument);
  CHECK(format_value(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("stage seeds are independent of other labels") {
  CHECK(derive_seed(7, "flow/gamma") == derive_seed(7, "flow/gamma"));
  CHECK(derive_seed(7, "flow/gamma") != derive_seed(7, "picard/gamma"));
  CHECK(derive_seed(7, "flow/gamma") != derive_seed(8, "flow/gamma"));
}

TEST_CASE("paper-check pipeline is deterministic and complete") {
  auto a = small_config("lagflow_run_a");
  auto b = small_config("lagflow_run_b");
  const auto ma = pipeline_paper_check(a);
  const auto mb = pipeline_paper_check(b);
  CHECK(ma.complete);
  CHECK(ma.summary.size() == 10);
  std::size_t csvs = 0;
  for (const auto& f : ma.files) {
    if (f.file.ends_with(".csv")) {
      ++csvs;
      CHECK(slurp(fs::path(a.output_dir) / f.file) == slurp(fs::path(b.output_dir) / f.file));
    }
  }
  CHECK(csvs >= 8);
  REQUIRE(ma.files.size() == mb.files.size());
  for (std::size_t i = 0; i < ma.files.size(); ++i) CHECK(ma.files[i].checksum == mb.files[i].checksum);
  CHECK(ma.config_hash == mb.config_hash);

  const auto back = manifest_from_json(slurp(fs::path(a.output_dir) / "manifest.json"));
  CHECK(back.config_hash == ma.config_hash);
  CHECK(back.files.size() == ma.files.size());
  CHECK(back.stages.size() == stage_names().size());
  CHECK(back.summary.size() == 10);
  CHECK_FALSE(fs::exists(fs::path(a.output_dir) / "manifest.json.tmp"));
  const auto s = emit_summary(ma);
  CHECK(s.table.rfind("criterion,name,measured,threshold,verdict\n", 0) == 0);
}

TEST_CASE("zero initial data passes every check") {
  auto c = small_config("lagflow_run_zero");
  c.solver.amplitude = 0.0;
  const auto m = pipeline_paper_check(c);
  for (const auto& r : m.summary) {
    INFO(r.criterion, " ", r.verdict);
    CHECK(verdict_passes(r.verdict));
  }
  CHECK(emit_summary(m).all_pass);
}

TEST_CASE("square-root control is reported with expected-fail semantics") {
  auto c = small_config("lagflow_run_control");
  c.probe.drift = "sqrt_control";
  c.probe.control_c = 4.0;
  Pipeline p(c);
  p.run_stage("probe");
  const auto m = p.finish();
  CHECK(row(m, 9).verdict == "expected-fail: pass");
  CHECK(verdict_passes(row(m, 9).verdict));
  CHECK(row(m, 1).verdict == "skipped");
}

TEST_CASE("stages that did not run are skipped") {
  auto c = small_config("lagflow_run_partial");
  Pipeline p(c);
  p.run_stage("verify-norms");
  const auto m = p.finish();
  CHECK(row(m, 3).verdict == "pass");
  for (int k : {1, 2, 5, 6, 7, 8, 9, 10}) CHECK(row(m, k).verdict == "skipped");
  CHECK(emit_summary(m).all_pass);
  CHECK_THROWS_AS(p.run_stage("bogus"), std::runtime_error);

  RunManifest failing = m;
  failing.summary[0].verdict = "fail";
  CHECK_FALSE(emit_summary(failing).all_pass);
}

TEST_CASE("a failing stage leaves a partial manifest naming it") {
  auto c = small_config("lagflow_run_fail");
  c.solver.amplitude = 1e8;
  c.solver.max_halvings = 0;
  Pipeline p(c);
  std::string message;
  try {
    p.run_stage("weights");
  } catch (const std::runtime_error& e) {
    message = e.what();
  }
  CHECK(message.rfind("stage 'solve'", 0) == 0);
  const auto m = manifest_from_json(slurp(fs::path(c.output_dir) / "manifest.json"));
  CHECK_FALSE(m.complete);
  CHECK(m.error == message);
  CHECK(m.stages.back().status == "failed");
}
