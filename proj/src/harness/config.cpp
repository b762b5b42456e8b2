#include "lagflow/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <algorithm>
#include <variant>

#include "lagflow/field/seeds.hpp"
#include "lagflow/flow/flow.hpp"

namespace lagflow::harness {

namespace {

using Slot = std::variant<double*, int*, bool*, std::string*, std::uint64_t*, std::vector<int>*, std::vector<double>*>;

struct Entry {
  std::string key;
  Slot slot;
};

std::vector<Entry> entries(ExperimentConfig& c) {
  return {
      {"solver.nu", &c.solver.nu},
      {"solver.dt", &c.solver.dt},
      {"solver.t_end", &c.solver.t_end},
      {"solver.n_moll", &c.solver.n_moll},
      {"solver.dealias", &c.solver.dealias},
      {"solver.n", &c.solver.n},
      {"solver.box_len", &c.solver.box_len},
      {"solver.snapshot_count", &c.solver.snapshot_count},
      {"solver.max_halvings", &c.solver.max_halvings},
      {"solver.initial", &c.solver.initial},
      {"solver.amplitude", &c.solver.amplitude},
      {"solver.energy", &c.solver.energy},
      {"solver.k_min", &c.solver.k_min},
      {"solver.k_max", &c.solver.k_max},
      {"solver.slope", &c.solver.slope},
      {"solver.mode", &c.solver.mode},
      {"flow.m", &c.flow.m},
      {"flow.scheme", &c.flow.scheme},
      {"flow.dt", &c.flow.dt},
      {"flow.T", &c.flow.T},
      {"flow.epsilon", &c.flow.epsilon},
      {"weights.pair_count", &c.weights.pair_count},
      {"weights.fit_pairs", &c.weights.fit_pairs},
      {"weights.c", &c.weights.c},
      {"norms.fields", &c.norms.fields},
      {"norms.k_max", &c.norms.k_max},
      {"stability.n_moll", &c.stability.n_moll},
      {"stability.p", &c.stability.p},
      {"stability.m", &c.stability.m},
      {"picard.n_iters", &c.picard.n_iters},
      {"picard.m", &c.picard.m},
      {"picard.T", &c.picard.T},
      {"picard.dt", &c.picard.dt},
      {"picard.threshold", &c.picard.threshold},
      {"picard.threshold_scale", &c.picard.threshold_scale},
      {"probe.m", &c.probe.m},
      {"probe.seeds", &c.probe.seeds},
      {"probe.T", &c.probe.T},
      {"probe.dt", &c.probe.dt},
      {"probe.tol", &c.probe.tol},
      {"probe.halvings", &c.probe.halvings},
      {"probe.epsilons", &c.probe.epsilons},
      {"probe.drift", &c.probe.drift},
      {"probe.control_c", &c.probe.control_c},
      {"output_dir", &c.output_dir},
      {"master_seed", &c.master_seed},
  };
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Assign {
  const std::string& text;
  std::string expected;

  bool operator()(double* p) {
    expected = "a number";
    return parse_number(text, *p) && std::isfinite(*p);
  }
  bool operator()(int* p) {
    expected = "an integer";
    return parse_number(text, *p);
  }
  bool operator()(std::uint64_t* p) {
    expected = "an unsigned integer";
    return parse_number(text, *p);
  }
  bool operator()(bool* p) {
    expected = "true or false";
    if (text == "true" || text == "1") return *p = true, true;
    if (text == "false" || text == "0") return *p = false, true;
    return false;
  }
  bool operator()(std::string* p) {
    expected = "a non-empty string";
    *p = text;
    return !text.empty();
  }
  bool operator()(std::vector<int>* p) {
    expected = "a comma-separated list of integers";
    p->clear();
    for (const auto& part : split_list(text)) {
      int v = 0;
      if (!parse_number(part, v)) return false;
      p->push_back(v);
    }
    return !p->empty();
  }
  bool operator()(std::vector<double>* p) {
    expected = "a comma-separated list of numbers";
    p->clear();
    for (const auto& part : split_list(text)) {
      double v = 0;
      if (!parse_number(part, v) || !std::isfinite(v)) return false;
      p->push_back(v);
    }
    return !p->empty();
  }
};

struct Render {
  std::string operator()(const double* p) const { return format_double(*p); }
  std::string operator()(const int* p) const { return std::to_string(*p); }
  std::string operator()(const std::uint64_t* p) const { return std::to_string(*p); }
  std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
  std::string operator()(const std::string* p) const { return *p; }
  std::string operator()(const std::vector<int>* p) const {
    std::string s;
    for (std::size_t i = 0; i < p->size(); ++i) s += (i ? ", " : "") + std::to_string((*p)[i]);
    return s;
  }
  std::string operator()(const std::vector<double>* p) const {
    std::string s;
    for (std::size_t i = 0; i < p->size(); ++i) s += (i ? ", " : "") + format_double((*p)[i]);
    return s;
  }
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// True when x / step is an integer up to round-off.
bool divides(double x, double step) {
  const double r = x / step;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

}  // namespace

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig s;
  s.nu = solver.nu;
  s.dt = solver.dt;
  s.t_end = solver.t_end;
  s.n_moll = solver.n_moll;
  s.dealias = solver.dealias;
  s.grid = Grid3(solver.n, solver.box_len);
  s.seed = master_seed;
  s.snapshot_count = solver.snapshot_count;
  s.max_halvings = solver.max_halvings;
  return s;
}

void ExperimentConfig::validate() const {
  try {
    solver_config().validate();
    (void)parse_initial_kind(solver.initial);
    (void)parse_scheme(flow.scheme);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(solver.k_min > 0.0 && solver.k_max >= solver.k_min, "solver band must satisfy 0 < k_min <= k_max");
  require(divides(solver.t_end, solver.dt), "solver.t_end must be a multiple of solver.dt");
  const double snap = solver.t_end / solver.snapshot_count;
  require(divides(snap, solver.dt), "solver snapshot interval must be a multiple of solver.dt");

  require(flow.m >= 2, "flow.m must be >= 2");
  require(flow.dt > 0.0 && flow.T > 0.0, "flow.dt and flow.T must be > 0");
  require(flow.T <= solver.t_end + 1e-12, "flow.T must not exceed solver.t_end");
  require(divides(flow.T, flow.dt), "flow.T must be a multiple of flow.dt");
  require(divides(flow.T, snap) && divides(snap, flow.dt),
          "flow.T and flow.dt must align with the solver snapshot interval");
  require(flow.epsilon >= 0.0, "flow.epsilon must be >= 0");

  require(weights.pair_count >= 1 && weights.fit_pairs >= 1, "weights pair counts must be >= 1");
  require(weights.c >= 0.0, "weights.c must be >= 0");

  require(norms.fields >= 1, "norms.fields must be >= 1");
  require(norms.k_max >= 1.0 && norms.k_max <= solver.n / 3.0, "norms.k_max must lie in [1, n/3]");

  for (int k : stability.n_moll) require(k >= 1, "stability.n_moll entries must be >= 1");
  require(stability.p >= 1.0, "stability.p must be >= 1");
  require(stability.m >= 2, "stability.m must be >= 2");

  require(picard.n_iters >= 5, "picard.n_iters must be >= 5");
  require(picard.m >= 2, "picard.m must be >= 2");
  require(picard.dt > 0.0 && picard.T > 0.0 && picard.T <= solver.t_end + 1e-12,
          "picard.T must lie in (0, solver.t_end] and picard.dt must be > 0");
  require(divides(picard.T, picard.dt), "picard.T must be a multiple of picard.dt");
  require(picard.threshold == "exp_half" || picard.threshold == "absolute",
          "picard.threshold must be exp_half or absolute");
  require(picard.threshold_scale > 0.0, "picard.threshold_scale must be > 0");

  require(probe.m >= 1 && probe.seeds >= 1, "probe.m and probe.seeds must be >= 1");
  require(probe.dt > 0.0 && probe.T > 0.0 && probe.T <= solver.t_end + 1e-12,
          "probe.T must lie in (0, solver.t_end] and probe.dt must be > 0");
  require(probe.halvings >= 0, "probe.halvings must be >= 0");
  require(divides(probe.T, 2.0 * probe.dt), "probe.T must be an even multiple of probe.dt");
  require(probe.tol >= 0.0, "probe.tol must be >= 0");
  for (double e : probe.epsilons) require(e > 0.0, "probe.epsilons entries must be > 0");
  require(probe.drift == "navier_stokes" || probe.drift == "sqrt_control",
          "probe.drift must be navier_stokes or sqrt_control");
  require(probe.control_c > 0.0, "probe.control_c must be > 0");
  require(!output_dir.empty(), "output_dir must be non-empty");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  auto table = entries(cfg);
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return e.key == key; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "'");
    Assign a{value, {}};
    if (!std::visit(a, it->slot)) throw ConfigError(where + key + " expects " + a.expected + ", got '" + value + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize(const ExperimentConfig& cfg) {
  ExperimentConfig copy = cfg;
  std::string out;
  for (const auto& e : entries(copy)) out += e.key + " = " + std::visit(Render{}, e.slot) + "\n";
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  // the output location does not change what is computed
  ExperimentConfig c = cfg;
  c.output_dir = "-";
  return fnv1a(serialize(c));
}

}  // namespace lagflow::harness
