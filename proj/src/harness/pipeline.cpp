#include "lagflow/harness/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lagflow/field/fft.hpp"
#include "lagflow/field/random_fields.hpp"
#include "lagflow/field/seeds.hpp"
#include "lagflow/field/snapshot_io.hpp"
#include "lagflow/flow/trajectory_io.hpp"
#include "lagflow/harness/csv.hpp"
#include "lagflow/lorentz/lorentz.hpp"
#include "lagflow/picard/picard.hpp"
#include "lagflow/probe/probe.hpp"

#ifndef LAGFLOW_VERSION
#define LAGFLOW_VERSION "unknown"
#endif

namespace lagflow::harness {

namespace {

constexpr double kTimeTol = 1e-9;

const std::vector<std::pair<int, std::string>>& criterion_names() {
  static const std::vector<std::pair<int, std::string>> names{
      {1, "strong energy inequality"},
      {2, "FGT time-integrated H2 diagnostic"},
      {3, "Lorentz interpolation with explicit constant"},
      {4, "refined L^{3,1} inequality"},
      {5, "flow incompressibility constant"},
      {6, "stability and convergence of mollified flows"},
      {7, "asymmetric Lusin-Lipschitz weights"},
      {8, "Picard convergence and bad-set decay"},
      {9, "uniqueness probes"},
      {10, "determinism and binary formats"},
  };
  return names;
}

std::vector<Snapshot> snapshots_until(const std::vector<Snapshot>& all, double T) {
  std::vector<Snapshot> out;
  for (const auto& s : all)
    if (s.t <= T + kTimeTol * std::max(1.0, T)) out.push_back(s);
  return out;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

std::string verdict(bool ok) { return ok ? kVerdictPass : kVerdictFail; }

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t file_checksum(const std::filesystem::path& p, std::uintmax_t& bytes) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read artifact " + p.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  bytes = data.size();
  return fnv1a_bytes(data.data(), data.size());
}

// Periodic drift whose flow piles particles up at the centre of the first of `bins` slabs.
FunctionDrift compressible_control(double L, double T, int bins) {
  const double a = L / T;
  const double target = 0.5 * L / std::max(1, bins);
  return FunctionDrift(
      [a, L, target](double, const Vec3& z) {
        return Vec3{-a * std::sin(2.0 * std::numbers::pi * (z.x - target) / L), 0, 0};
      },
      L);
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"solve",  "verify-norms", "weights", "advect",
                                              "stability", "picard",   "probe",   "formats"};
  return names;
}

struct Pipeline::State {
  std::set<std::string> done;
  std::vector<StageRecord> stages;
  std::vector<std::string> files;
  std::map<int, SummaryRow> rows;

  SpectralVectorField u0;
  double u0_energy = 0.0;
  RunResult run;
  double snapshot_interval = 0.0;

  double c = 0.0;
  std::vector<TimedScalar> h;
  PairReport pointwise;

  ParticleEnsemble ensemble;
};

Pipeline::Pipeline(ExperimentConfig cfg) : cfg_(std::move(cfg)), dir_(cfg_.output_dir), st_(std::make_unique<State>()) {
  cfg_.validate();
  std::filesystem::create_directories(dir_);
}

Pipeline::~Pipeline() = default;

void Pipeline::write_csv(const std::string& file, const std::string& text) {
  write_file_atomic(dir_ / file, text);
  if (std::find(st_->files.begin(), st_->files.end(), file) == st_->files.end()) st_->files.push_back(file);
}

void Pipeline::write_binary_record(const std::string& file) {
  if (std::find(st_->files.begin(), st_->files.end(), file) == st_->files.end()) st_->files.push_back(file);
}

void Pipeline::set_row(SummaryRow row) {
  for (const auto& [id, name] : criterion_names())
    if (id == row.criterion && row.name.empty()) row.name = name;
  st_->rows[row.criterion] = std::move(row);
}

void Pipeline::ensure(const std::string& name) {
  if (!st_->done.count(name)) run_stage(name);
}

void Pipeline::run_stage(const std::string& name) {
  if (st_->done.count(name)) return;
  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    if (name == "solve") solve();
    else if (name == "verify-norms") verify_norms();
    else if (name == "weights") weights();
    else if (name == "advect") advect();
    else if (name == "stability") stability();
    else if (name == "picard") picard();
    else if (name == "probe") probe();
    else if (name == "formats") formats();
    else throw std::invalid_argument("unknown stage '" + name + "'");
  } catch (const std::exception& e) {
    st_->stages.push_back({name, seconds(), "failed"});
    const std::string what = e.what();
    const bool nested = what.rfind("stage '", 0) == 0;
    const std::string msg = nested ? what : "stage '" + name + "': " + what;
    write_manifest(manifest(false, msg));
    throw std::runtime_error(msg);
  }
  st_->done.insert(name);
  st_->stages.push_back({name, seconds(), "ok"});
}

void Pipeline::solve() {
  const auto& s = cfg_.solver;
  const SolverConfig scfg = cfg_.solver_config();
  InitialDataParams p;
  p.amplitude = s.amplitude;
  p.energy = s.energy;
  p.k_min = s.k_min;
  p.k_max = s.k_max;
  p.slope = s.slope;
  p.mode = s.mode;
  st_->u0 = make_initial_data(parse_initial_kind(s.initial), scfg.grid, p, derive_seed(cfg_.master_seed, "initial"));
  st_->u0_energy = std::pow(sobolev_norm(st_->u0, 0.0), 2);
  st_->run = run(st_->u0, scfg);
  st_->snapshot_interval = s.t_end / s.snapshot_count;

  CsvTable diag({"t", "energy", "enstrophy", "h2", "grad_l31", "fl1"});
  for (const auto& d : st_->run.diagnostics) diag.row() << d.t << d.energy << d.enstrophy << d.h2 << d.grad_l31 << d.fl1;
  write_csv("diagnostics.csv", diag.str());

  CsvTable checks({"check", "lhs", "rhs", "ratio", "passed"});
  const auto energy = check_energy_inequality(st_->run.diagnostics, s.nu);
  checks.row() << "energy_inequality" << energy.lhs << energy.rhs << energy.ratio << energy.passed;
  SummaryRow r1{1, "", energy.ratio, "ratio <= 1 + 1e-3", verdict(energy.passed)};
  set_row(r1);
  if (s.t_end >= 1.0) {
    const auto fgt = check_fgt_bound(st_->run.diagnostics, st_->u0_energy, s.t_end);
    checks.row() << "fgt" << fgt.lhs << fgt.rhs << fgt.ratio << fgt.passed;
    set_row({2, "", fgt.ratio, "spread < 2x over an initial-data family (acceptance sweep)", kVerdictSkipped});
    const auto gl = check_gradient_lorentz_integral(st_->run.diagnostics, st_->u0_energy, s.t_end);
    checks.row() << "gradient_lorentz_integral" << gl.lhs << gl.rhs << gl.ratio << gl.passed;
  }
  write_csv("solver_checks.csv", checks.str());

  const auto& last = st_->run.snapshots.back();
  io::write_vector_snapshot(dir_ / "u_final.lgf", to_real(last.u), last.t, s.nu);
  write_binary_record("u_final.lgf");
}

void Pipeline::verify_norms() {
  const Grid3 g(cfg_.solver.n, cfg_.solver.box_len);
  const Grid3 g2(2 * cfg_.solver.n, cfg_.solver.box_len);
  const std::uint64_t base = derive_seed(cfg_.master_seed, "norms");
  const BandSpec band{1.0, cfg_.norms.k_max, 1.0};
  CsvTable t({"field_id", "check_name", "lhs", "rhs", "ratio", "passed"});

  bool interp_ok = true;
  double interp_worst = 0.0, refined_n = 0.0, refined_2n = 0.0;
  for (int i = 0; i < cfg_.norms.fields; ++i) {
    const auto seed = derive_seed(base, std::uint64_t(i));
    const auto fs = random_band_scalar(g, band, seed);
    const auto f = to_real(fs);
    const auto r = check_lorentz_interpolation(f, 2.0, 6.0, 0.5);
    interp_ok = interp_ok && r.passed;
    interp_worst = std::max(interp_worst, r.ratio);
    t.row() << i << "interpolation_2_6_half" << r.lhs << r.rhs << r.ratio << r.passed;
    const auto a = check_refined_inequality(fs);
    const auto b = check_refined_inequality(random_band_scalar(g2, band, seed));
    refined_n = std::max(refined_n, a.ratio);
    refined_2n = std::max(refined_2n, b.ratio);
    t.row() << i << "refined_n" << a.lhs << a.rhs << a.ratio << a.passed;
    t.row() << i << "refined_2n" << b.lhs << b.rhs << b.ratio << b.passed;
  }

  // indicators of node sets: the interpolation inequality is an identity up to 1/C
  const double C = interpolation_constant(2.0, 6.0, 0.5);
  bool indicator_ok = true;
  int id = cfg_.norms.fields;
  for (std::size_t count : {std::size_t(1), std::size_t(17), g.nodes() / 8, g.nodes() / 2, g.nodes()}) {
    ScalarField f(g);
    for (std::size_t k = 0; k < count; ++k) f.comp[0][(k * 7919) % g.nodes()] = 1.0;
    const auto r = check_lorentz_interpolation(f, 2.0, 6.0, 0.5);
    const bool exact = std::abs(r.ratio - 1.0 / C) <= 1e-10;
    indicator_ok = indicator_ok && exact && r.passed;
    t.row() << id++ << "indicator_identity" << r.lhs << r.rhs << r.ratio << exact;
  }

  SpectralScalarField mode(g);
  mode.comp[0][g.mode(1, 2, 0)] = Complex(0.5, -0.25);
  const auto m1 = check_refined_inequality(mode);
  const auto m2 = check_refined_inequality(scaled(mode, 1000.0));
  const bool invariant = std::abs(m1.ratio - m2.ratio) <= 1e-10 * m1.ratio;
  t.row() << id << "single_mode_unit" << m1.lhs << m1.rhs << m1.ratio << true;
  t.row() << id++ << "single_mode_scaled" << m2.lhs << m2.rhs << m2.ratio << invariant;

  for (int i = 0; i < 4; ++i) {
    const auto v = random_band_vector(g, band, derive_seed(base, "agmon" + std::to_string(i)), true);
    const auto a = check_agmon(v, 1.0, 2.0);
    t.row() << id++ << "agmon_split" << a.sup_norm << a.low_bound + a.high_bound
            << a.sup_norm / (a.low_bound + a.high_bound) << (a.sup_dominated && a.split_holds);
  }
  write_csv("norms.csv", t.str());

  set_row({3, "", interp_worst, "max ratio <= 1; indicator ratio = 1/54 to 1e-10", verdict(interp_ok && indicator_ok)});
  const double change = std::abs(refined_2n - refined_n) / refined_n;
  set_row({4, "", change, "relative change of max ratio n -> 2n < 0.1; single-mode invariance 1e-10",
           verdict(change < 0.1 && invariant)});
}

void Pipeline::weights() {
  ensure("solve");
  const auto snaps = snapshots_until(st_->run.snapshots, cfg_.flow.T);
  std::optional<double> c;
  if (cfg_.weights.c > 0.0) c = cfg_.weights.c;
  const auto first = asymmetric_weight(snaps.front().u, c, std::size_t(cfg_.weights.fit_pairs),
                                       derive_seed(cfg_.master_seed, "weights/fit"));
  st_->c = first.c;
  st_->h.clear();
  for (const auto& s : snaps) {
    if (&s == &snaps.front()) {
      st_->h.push_back({s.t, first.h});
    } else {
      st_->h.push_back({s.t, asymmetric_weight(s.u, st_->c).h});
    }
  }

  CsvTable t({"check", "violations", "worst_ratio", "fitted_c"});
  const auto verify_seed = derive_seed(cfg_.master_seed, "weights/verify");
  const auto p0 = verify_asymmetric(to_real(snaps.front().u), st_->h.front().f, std::size_t(cfg_.weights.pair_count), verify_seed);
  const auto p1 = verify_asymmetric(to_real(snaps.back().u), st_->h.back().f, std::size_t(cfg_.weights.pair_count),
                                    derive_seed(verify_seed, std::uint64_t(1)));
  t.row() << "pointwise_t0" << p0.violations << p0.worst_ratio << st_->c;
  t.row() << "pointwise_tT" << p1.violations << p1.worst_ratio << st_->c;
  write_csv("weights.csv", t.str());
  st_->pointwise = p0.violation_fraction >= p1.violation_fraction ? p0 : p1;
  set_row({7, "asymmetric Lusin-Lipschitz weights (pointwise part)", st_->pointwise.violation_fraction,
           "pointwise violation fraction < 1e-3", verdict(st_->pointwise.violation_fraction < 1e-3)});
}

void Pipeline::advect() {
  ensure("weights");
  const auto& f = cfg_.flow;
  const double L = cfg_.solver.box_len;
  FieldDrift b(snapshots_until(st_->run.snapshots, f.T));
  const ForcingPath gamma = f.epsilon > 0.0 ? sample_brownian(f.T, f.dt, f.epsilon, derive_seed(cfg_.master_seed, "flow/gamma"))
                                            : zero_path(f.T, f.dt);
  FlowOptions opt;
  opt.T = f.T;
  opt.dt = f.dt;
  opt.scheme = parse_scheme(f.scheme);
  opt.save_stride = int(std::lround(st_->snapshot_interval / f.dt));
  st_->ensemble = integrate_lattice(b, gamma, f.m, opt);
  io::write_trajectories(dir_ / "trajectories.lgt", st_->ensemble);
  write_binary_record("trajectories.lgt");

  CsvTable t({"check", "value", "threshold", "passed"});
  // Bins stay fixed while the lattice is refined, so the count per bin grows and L-hat
  // converges; the limit applies to the finest lattice.
  const int bins = std::max(1, f.m / 4);
  const double lhat = compressibility_constant(st_->ensemble, bins);
  double lhat_fine = lhat;
  bool refine_ok = true;
  if (f.m <= 32) {
    lhat_fine = compressibility_constant(integrate_lattice(b, gamma, 2 * f.m, opt), bins);
    refine_ok = lhat_fine <= lhat;
  }
  t.row() << "compressibility_m" << lhat << "nan" << true;
  if (f.m <= 32) t.row() << "compressibility_2m" << lhat_fine << lhat << refine_ok;
  t.row() << "compressibility_finest" << lhat_fine << 1.2 << (lhat_fine <= 1.2);
  const auto control = compressible_control(L, f.T, bins);
  const double lctrl = compressibility_constant(integrate_lattice(control, zero_path(f.T, f.dt), f.m, opt), bins);
  t.row() << "compressibility_control" << lctrl << 1.5 << (lctrl > 1.5);

  const auto H = flow_weight(st_->h, st_->ensemble);
  const auto lip = check_flow_lipschitz(st_->ensemble, H);
  t.row() << "flow_lipschitz_fraction" << lip.violation_fraction << 1e-2 << (lip.violation_fraction < 1e-2);
  const double budget =
      st_->c * time_integral(st_->run.diagnostics, f.T, [](const DiagnosticsRecord& d) { return d.grad_l31; });
  const auto tail = weak_tail_check(H, budget, L * L * L);
  const bool trivial_tail = tail.quasi_norm == 0.0;
  const bool slope_ok = trivial_tail || (tail.fit_points >= 2 && tail.slope <= -2.5);
  t.row() << "weak_tail_slope" << tail.slope << -2.5 << slope_ok;
  t.row() << "weak_tail_ratio" << tail.ratio << "nan" << true;
  write_csv("flow_checks.csv", t.str());

  set_row({5, "", lhat_fine, "L <= 1.2 on the finest lattice (2m when m <= 32), not larger than at m, control > 1.5",
           verdict(lhat_fine <= 1.2 && refine_ok && lctrl > 1.5)});
  const bool ok7 = st_->pointwise.violation_fraction < 1e-3 && lip.violation_fraction < 1e-2 && slope_ok;
  set_row({7, "", lip.violation_fraction, "pointwise < 1e-3, flow < 1e-2, weak-L3 tail slope <= -2.5", verdict(ok7)});
}

void Pipeline::stability() {
  ensure("solve");
  const auto& f = cfg_.flow;
  const auto ref_snaps = snapshots_until(st_->run.snapshots, f.T);
  FieldDrift ref(ref_snaps);
  const ForcingPath gamma = zero_path(f.T, f.dt);
  FlowOptions opt;
  opt.T = f.T;
  opt.dt = f.dt;
  opt.scheme = parse_scheme(f.scheme);
  opt.save_stride = int(std::lround(st_->snapshot_interval / f.dt));
  const auto x0 = lattice_points(cfg_.stability.m, cfg_.solver.box_len);

  std::vector<std::unique_ptr<FieldDrift>> drifts;
  for (int k : cfg_.stability.n_moll) {
    SolverConfig scfg = cfg_.solver_config();
    scfg.n_moll = k;
    scfg.t_end = ref_snaps.back().t;
    scfg.snapshot_count = int(ref_snaps.size()) - 1;
    drifts.push_back(std::make_unique<FieldDrift>(lagflow::run(st_->u0, scfg).snapshots));
  }
  std::vector<const Drift*> seq;
  std::vector<ForcingPath> gammas;
  for (const auto& d : drifts) {
    seq.push_back(d.get());
    gammas.push_back(gamma);
  }
  const auto conv = flow_convergence_test(seq, gammas, ref, gamma, x0, opt, cfg_.stability.p);

  CsvTable t({"n_moll", "lhs", "drift_gap", "forcing_gap", "gradient_budget", "lambda_opt", "rhs_opt",
              "fitted_constant", "convergence_gap"});
  std::vector<double> lhs;
  double worst_c = 0.0;
  for (std::size_t i = 0; i < drifts.size(); ++i) {
    const auto r = stability_gap(*drifts[i], gamma, ref, gamma, x0, opt, 1.0, cfg_.stability.p);
    lhs.push_back(r.lhs);
    worst_c = std::max(worst_c, r.fitted_constant);
    t.row() << cfg_.stability.n_moll[i] << r.lhs << r.drift_gap << r.forcing_gap << r.gradient_budget << r.lambda_opt
            << r.rhs_opt << r.fitted_constant << conv[i];
  }
  write_csv("stability.csv", t.str());
  const bool ok = non_increasing(lhs) && non_increasing(conv) && conv.back() < 10.0 * f.dt;
  set_row({6, "", worst_c, "lhs and convergence gaps non-increasing in n_moll; last gap < 10 dt", verdict(ok)});
}

void Pipeline::picard() {
  ensure("solve");
  const auto& pc = cfg_.picard;
  FieldDrift b(snapshots_until(st_->run.snapshots, pc.T));
  const ForcingPath gamma = cfg_.flow.epsilon > 0.0
                                ? sample_brownian(pc.T, pc.dt, cfg_.flow.epsilon, derive_seed(cfg_.master_seed, "picard/gamma"))
                                : zero_path(pc.T, pc.dt);
  PicardOptions opt;
  opt.T = pc.T;
  opt.dt = pc.dt;
  opt.n_iters = pc.n_iters;
  const auto lat = picard_lattice(b, gamma, lattice_points(pc.m, cfg_.solver.box_len), opt);

  CsvTable pts({"x_index", "slope", "fit_first", "fit_last", "converged_immediately", "z0_gap", "z0_bound"});
  std::size_t fast = 0;
  bool z0_ok = true;
  for (std::size_t i = 0; i < lat.points.size(); ++i) {
    const auto r = convergence_rate(lat.gaps[i], cfg_.solver.box_len);
    if (r.converged_immediately || r.slope <= -0.8) ++fast;
    z0_ok = z0_ok && lat.gaps[i][0] <= lat.b_sup_integral * (1.0 + 1e-12) + 1e-14;
    pts.row() << i << r.slope << r.fit_first << r.fit_last << r.converged_immediately << lat.gaps[i][0]
              << lat.b_sup_integral;
  }
  write_csv("picard_points.csv", pts.str());

  const ThresholdRule rule{pc.threshold == "absolute" ? ThresholdKind::absolute : ThresholdKind::exp_half,
                           pc.threshold_scale};
  const auto decay = bad_set_measure(lat, rule);
  CsvTable t({"n", "threshold", "fraction", "slope_fit"});
  bool any_positive = false;
  for (const auto& r : decay.rows) {
    t.row() << r.n << r.threshold << r.fraction << decay.slope_fit;
    any_positive = any_positive || (r.n >= 1 && r.fraction > 0.0);
  }
  write_csv("picard_decay.csv", t.str());

  const double share = double(fast) / double(lat.points.size());
  const bool decay_ok = decay.non_increasing && (!any_positive || decay.slope_fit < 0.0);
  set_row({8, "", share, "share with slope <= -0.8 >= 0.9; Z0 bound everywhere; bad set non-increasing, slope < 0",
           verdict(share >= 0.9 && z0_ok && decay_ok)});
}

void Pipeline::probe() {
  const auto& pr = cfg_.probe;
  const double L = cfg_.solver.box_len;
  const bool control = pr.drift == "sqrt_control";
  std::unique_ptr<Drift> b;
  std::vector<Vec3> points;
  if (control) {
    b = std::make_unique<FunctionDrift>(sqrt_singularity_drift(pr.control_c, L));
    points = singular_plane_points(pr.m, L);
  } else {
    ensure("solve");
    b = std::make_unique<FieldDrift>(snapshots_until(st_->run.snapshots, pr.T));
    points = lattice_points(pr.m, L);
  }

  std::vector<double> dts;
  for (int j = 0; j <= pr.halvings; ++j) dts.push_back(pr.dt / std::pow(2.0, j));
  const double path_dt = dts.back();

  CsvTable levels({"mode", "epsilon", "dt", "tol", "fraction"});
  auto rows_of = [](CsvTable& t, const UniquenessReport& r) {
    for (const auto& row : r.rows) t.row() << row.x_index << row.seed << row.spread << row.tol << row.dt << row.passed;
  };
  const std::vector<std::string> header{"x_index", "seed", "spread", "tol", "dt", "passed"};

  CsvTable ae(header);
  std::vector<double> ae_frac;
  for (double dt : dts) {
    ProbeOptions opt;
    opt.T = pr.T;
    opt.dt = dt;
    opt.tol = pr.tol;
    const auto rep = ae_uniqueness_probe(*b, zero_path(pr.T, path_dt), points, opt);
    rows_of(ae, rep);
    ae_frac.push_back(rep.fraction);
    levels.row() << "ae" << 0.0 << dt << rep.tol << rep.fraction;
  }
  write_csv("probe_ae.csv", ae.str());

  bool sde_ok = true;
  for (std::size_t e = 0; e < pr.epsilons.size(); ++e) {
    std::vector<std::uint64_t> seeds;
    for (int s = 0; s < pr.seeds; ++s)
      seeds.push_back(derive_seed(cfg_.master_seed, "probe/eps" + std::to_string(e) + "/seed" + std::to_string(s)));
    CsvTable sde(header);
    std::vector<double> frac;
    for (double dt : dts) {
      ProbeOptions opt;
      opt.T = pr.T;
      opt.dt = dt;
      opt.tol = pr.tol;
      const auto rep = sde_uniqueness_probe(*b, pr.epsilons[e], points, seeds, opt, path_dt);
      rows_of(sde, rep);
      frac.push_back(rep.fraction);
      levels.row() << "sde" << pr.epsilons[e] << dt << rep.tol << rep.fraction;
    }
    sde_ok = sde_ok && non_increasing(frac);
    write_csv("probe_sde_" + std::to_string(e + 1) + ".csv", sde.str());
  }
  write_csv("probe_levels.csv", levels.str());

  if (control) {
    const bool persists = std::all_of(ae_frac.begin(), ae_frac.end(), [](double f) { return f > 0.05; });
    set_row({9, "uniqueness probes (square-root control)", ae_frac.back(),
             "control branching fraction > 0.05 at every refinement",
             persists ? "expected-fail: pass" : "expected-fail: fail"});
  } else {
    set_row({9, "", ae_frac.back(), "branching fractions non-increasing across dt halvings",
             verdict(non_increasing(ae_frac) && sde_ok)});
  }
}

void Pipeline::formats() {
  ensure("solve");
  ensure("advect");
  std::size_t mismatches = 0;
  const auto u = to_real(st_->run.snapshots.back().u);
  const auto back = io::read_vector_snapshot(dir_ / "u_final.lgf");
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u.comp[c].size(); ++i) mismatches += u.comp[c][i] != back.comp[c][i];
  const auto e = io::read_trajectories(dir_ / "trajectories.lgt");
  const auto& a = st_->ensemble;
  if (e.positions.size() != a.positions.size() || e.size() != a.size()) {
    ++mismatches;
  } else {
    for (std::size_t s = 0; s < a.positions.size(); ++s)
      for (std::size_t i = 0; i < a.size(); ++i)
        for (int d = 0; d < 3; ++d) mismatches += a.positions[s][i][d] != e.positions[s][i][d];
  }
  set_row({10, "", double(mismatches), "0 differing values after LGF1/LGT1 round trip", verdict(mismatches == 0)});
}

RunManifest Pipeline::manifest(bool complete, const std::string& error) const {
  RunManifest m;
  m.config_hash = config_hash(cfg_);
  m.version = LAGFLOW_VERSION;
  m.stages = st_->stages;
  m.complete = complete;
  m.error = error;
  for (const auto& f : st_->files) {
    ArtifactRecord a;
    a.file = f;
    a.checksum = file_checksum(dir_ / f, a.bytes);
    m.files.push_back(a);
  }
  for (const auto& [id, name] : criterion_names()) {
    auto it = st_->rows.find(id);
    if (it != st_->rows.end()) {
      m.summary.push_back(it->second);
    } else {
      SummaryRow r;
      r.criterion = id;
      r.name = name;
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.threshold = "stage not run";
      m.summary.push_back(r);
    }
  }
  return m;
}

void Pipeline::write_manifest(const RunManifest& m) const {
  write_file_atomic(dir_ / "manifest.json", manifest_to_json(m));
}

RunManifest Pipeline::finish() {
  {
    RunManifest pre = manifest(true, "");
    write_csv("summary.csv", emit_summary(pre).table);
  }
  RunManifest m = manifest(true, "");
  write_manifest(m);
  return m;
}

RunManifest pipeline_paper_check(const ExperimentConfig& cfg) {
  Pipeline p(cfg);
  for (const auto& s : stage_names()) p.run_stage(s);
  return p.finish();
}

bool verdict_passes(const std::string& v) { return v != kVerdictFail && v != "expected-fail: fail"; }

Summary emit_summary(const RunManifest& m) {
  Summary s;
  CsvTable t({"criterion", "name", "measured", "threshold", "verdict"});
  std::ostringstream text;
  for (const auto& r : m.summary) {
    std::string name = r.name, threshold = r.threshold;
    std::replace(name.begin(), name.end(), ',', ';');
    std::replace(threshold.begin(), threshold.end(), ',', ';');
    t.row() << r.criterion << name << r.measured << threshold << r.verdict;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%2d  %-22s", r.criterion, r.verdict.c_str());
    text << buf << format_value(r.measured) << "  " << r.name << "  [" << r.threshold << "]\n";
    s.all_pass = s.all_pass && verdict_passes(r.verdict);
  }
  if (!m.complete) {
    text << "incomplete run: " << m.error << "\n";
    s.all_pass = false;
  }
  s.table = t.str();
  s.text = text.str();
  return s;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = hex(m.config_hash);
  j["version"] = m.version;
  j["complete"] = m.complete;
  j["error"] = m.error;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : m.stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}, {"status", s.status}});
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : m.files) j["files"].push_back({{"file", f.file}, {"bytes", f.bytes}, {"fnv1a", hex(f.checksum)}});
  j["summary"] = nlohmann::ordered_json::array();
  for (const auto& r : m.summary)
    j["summary"].push_back({{"criterion", r.criterion},
                            {"name", r.name},
                            {"measured", std::isfinite(r.measured) ? nlohmann::ordered_json(r.measured) : nullptr},
                            {"threshold", r.threshold},
                            {"verdict", r.verdict}});
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.config_hash = std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
  m.version = j.at("version").get<std::string>();
  m.complete = j.at("complete").get<bool>();
  m.error = j.at("error").get<std::string>();
  for (const auto& s : j.at("stages")) m.stages.push_back({s.at("name"), s.at("seconds"), s.at("status")});
  for (const auto& f : j.at("files"))
    m.files.push_back({f.at("file"), f.at("bytes"), std::stoull(f.at("fnv1a").get<std::string>(), nullptr, 16)});
  for (const auto& r : j.at("summary")) {
    SummaryRow row;
    row.criterion = r.at("criterion");
    row.name = r.at("name");
    row.measured = r.at("measured").is_null() ? std::numeric_limits<double>::quiet_NaN() : r.at("measured").get<double>();
    row.threshold = r.at("threshold");
    row.verdict = r.at("verdict");
    m.summary.push_back(row);
  }
  return m;
}

}  // namespace lagflow::harness
