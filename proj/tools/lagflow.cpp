#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lagflow/harness/config.hpp"
#include "lagflow/harness/pipeline.hpp"

namespace {

// Caps the OpenMP team size; ignored when unset, rejected when malformed.
void apply_thread_cap() {
  const char* env = std::getenv("LAGFLOW_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw std::invalid_argument("LAGFLOW_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lagflow::harness;
  const std::map<std::string, std::vector<std::string>> commands{
      {"solve", {"solve"}},
      {"advect", {"advect", "formats"}},
      {"weights", {"weights"}},
      {"picard", {"picard"}},
      {"probe-uniqueness", {"probe"}},
      {"verify-norms", {"verify-norms"}},
      {"paper-check", stage_names()},
  };

  CLI::App app{"lagflow: Navier-Stokes, Lagrangian flow and Lorentz-norm checks"};
  app.require_subcommand(1);
  std::string config_path;
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Print only the verdict table");
  for (const auto& [name, stages] : commands) {
    auto* sub = app.add_subcommand(name, "Run the '" + name + "' stages and write their reports");
    sub->add_option("config", config_path, "Configuration file (section.key = value lines)")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    apply_thread_cap();
    const std::string command = app.get_subcommands().front()->get_name();
    const ExperimentConfig cfg = parse_config(config_path);
    Pipeline pipeline(cfg);
    for (const auto& stage : commands.at(command)) {
      if (!quiet) std::cerr << "[lagflow] stage " << stage << "\n";
      pipeline.run_stage(stage);
    }
    const RunManifest m = pipeline.finish();
    const Summary s = emit_summary(m);
    std::cout << s.text;
    if (!quiet) std::cout << "reports written to " << cfg.output_dir << "\n";
    return s.all_pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "lagflow: error: " << e.what() << "\n";
    return 1;
  }
}
