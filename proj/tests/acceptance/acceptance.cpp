// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero if any fails.
// Usage: acceptance [criterion ...]   (no arguments runs all ten)

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/random_fields.hpp"
#include "lagflow/field/seeds.hpp"
#include "lagflow/field/snapshot_io.hpp"
#include "lagflow/flow/flow.hpp"
#include "lagflow/flow/trajectory_io.hpp"
#include "lagflow/harness/csv.hpp"
#include "lagflow/harness/pipeline.hpp"
#include "lagflow/lorentz/lorentz.hpp"
#include "lagflow/picard/picard.hpp"
#include "lagflow/probe/probe.hpp"
#include "lagflow/weights/weights.hpp"

using namespace lagflow;

namespace {

constexpr double kL = 2.0 * std::numbers::pi;
constexpr std::uint64_t kMaster = 20261015;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string join(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(f, v[i]);
  return s + "]";
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

SpectralVectorField random_initial(const Grid3& g, double energy, std::uint64_t seed) {
  InitialDataParams p;
  p.energy = energy;
  p.k_min = 1.0;
  p.k_max = 4.0;
  return make_initial_data(InitialKind::random_band, g, p, seed);
}

SolverConfig solver_config(int n, double nu, double dt, double t_end, int snapshots) {
  SolverConfig c;
  c.grid = Grid3(n, kL);
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_count = snapshots;
  return c;
}

// Shared Navier-Stokes drift: random band data, n = 32, snapshots every 0.05 up to t = 2.
const RunResult& ns_run() {
  static const RunResult r = [] {
    const auto cfg = solver_config(32, 0.05, 0.01, 2.0, 40);
    return run(random_initial(cfg.grid, 40.0, derive_seed(kMaster, "ns/initial")), cfg);
  }();
  return r;
}

std::vector<Snapshot> ns_snapshots(double T) {
  std::vector<Snapshot> out;
  for (const auto& s : ns_run().snapshots)
    if (s.t <= T + 1e-9) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  double worst = 0.0;
  int runs = 0;
  bool ok = true;
  double slowest = 0.0;
  for (int n : {32, 64}) {
    for (double nu : {0.02, 0.05, 0.1}) {
      const auto cfg = solver_config(n, nu, 0.01, 1.0, 10);
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = run(random_initial(cfg.grid, 40.0, derive_seed(kMaster, "c1/initial")), cfg);
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (n == 32) slowest = std::max(slowest, sec);
      const auto rep = check_energy_inequality(r.diagnostics, nu, 1e-3);
      worst = std::max(worst, rep.ratio);
      ok = ok && rep.passed;
      ++runs;
    }
  }
  ok = ok && slowest < 120.0;
  return {ok, "worst E(t)+2nu*int Z over E(s) = " + fmt("%.7f", worst) + " (limit 1.001) over " + std::to_string(runs) +
                  " runs; slowest n=32 run " + fmt("%.1f", slowest) + " s (limit 120)"};
}

Outcome criterion2() {
  // ||u0||_{L2} spread over [0.5, 4]; lhs read off a single run to T = 4 for T in {1, 2, 4}
  std::vector<double> norms;
  for (int i = 0; i < 10; ++i) norms.push_back(0.5 * std::pow(8.0, i / 9.0));
  std::map<int, std::vector<std::vector<double>>> ratios;  // n -> member -> T
  for (int n : {32, 64}) {
    for (int i = 0; i < 10; ++i) {
      if (n == 64 && i % 3 != 0) continue;
      const auto cfg = solver_config(n, 0.05, 0.02, 4.0, 4);
      const auto u0 = random_initial(cfg.grid, norms[i] * norms[i], derive_seed(kMaster, "c2/member" + std::to_string(i)));
      const auto r = run(u0, cfg);
      std::vector<double> row;
      for (double T : {1.0, 2.0, 4.0}) row.push_back(check_fgt_bound(r.diagnostics, norms[i] * norms[i], T).ratio);
      ratios[n].push_back(row);
    }
  }
  double lo = kInf, hi = 0.0;
  for (const auto& row : ratios[32])
    for (double v : row) lo = std::min(lo, v), hi = std::max(hi, v);
  const double spread = hi / lo;
  double growth = 0.0;
  for (std::size_t k = 0; k < ratios[64].size(); ++k)
    for (int t = 0; t < 3; ++t) growth = std::max(growth, ratios[64][k][t] / ratios[32][3 * k][t]);
  const bool ok = spread < 2.0 && growth <= 1.0 + 1e-2;
  std::string d = "ratio spread max/min = " + fmt("%.3f", spread) + " (limit 2) over 10 members x T in {1,2,4} at n=32";
  d += "; min " + fmt("%.4g", lo) + ", max " + fmt("%.4g", hi);
  d += "; worst n=64/n=32 ratio " + fmt("%.5f", growth) + " (limit 1.01)";
  return {ok, d};
}

Outcome criterion3() {
  const Grid3 g(32, kL);
  const double C = interpolation_constant(2.0, 6.0, 0.5);
  double worst = 0.0;
  bool ok = std::abs(C - 54.0) < 1e-12;
  for (int i = 0; i < 200; ++i) {
    const BandSpec band{1.0, 2.0 + (i % 9), double(i % 3)};
    const auto f = to_real(random_band_scalar(g, band, derive_seed(kMaster, std::uint64_t(1000 + i))));
    const auto r = check_lorentz_interpolation(f, 2.0, 6.0, 0.5);
    worst = std::max(worst, r.ratio);
    ok = ok && r.ratio <= 1.0;
  }
  double worst_identity = 0.0;
  int indicators = 0;
  std::mt19937_64 rng(derive_seed(kMaster, "c3/indicators"));
  for (std::size_t count : {std::size_t(1), std::size_t(2), std::size_t(10), std::size_t(1000), g.nodes() / 3, g.nodes()}) {
    for (int rep = 0; rep < 3; ++rep) {
      ScalarField f(g);
      std::vector<std::size_t> idx(g.nodes());
      std::iota(idx.begin(), idx.end(), std::size_t(0));
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t k = 0; k < count; ++k) f.comp[0][idx[k]] = 1.0;
      const auto r = check_lorentz_interpolation(f, 2.0, 6.0, 0.5);
      worst_identity = std::max(worst_identity, std::abs(r.ratio - 1.0 / C));
      ++indicators;
    }
  }
  ok = ok && worst_identity <= 1e-10;
  return {ok, "C = " + fmt("%.12g", C) + "; worst ratio over 200 band fields " + fmt("%.4g", worst) +
                  " (limit 1); worst |ratio - 1/C| over " + std::to_string(indicators) + " indicators " +
                  fmt("%.2e", worst_identity) + " (limit 1e-10)"};
}

Outcome criterion4() {
  std::map<int, double> worst;
  for (int n : {32, 64}) {
    const Grid3 g(n, kL);
    double w = 0.0;
    for (int i = 0; i < 40; ++i) {
      const BandSpec band{1.0, 1.0 + (i % 10), double(i % 4) * 0.5};
      const auto f = random_band_scalar(g, band, derive_seed(kMaster, std::uint64_t(5000 + i)));
      w = std::max(w, check_refined_inequality(f).ratio);
    }
    worst[n] = w;
  }
  const double change = std::abs(worst[64] - worst[32]) / worst[32];
  const Grid3 g(32, kL);
  double invariance = 0.0;
  for (auto [ix, iy, iz] : std::vector<std::array<int, 3>>{{1, 0, 0}, {2, 3, 1}, {5, 0, 7}}) {
    SpectralScalarField m(g);
    m.comp[0][g.mode(ix, (iy + g.n) % g.n, (iz + g.n) % g.n)] = Complex(0.3, 0.4);
    const double r1 = check_refined_inequality(m).ratio;
    for (double a : {1e-6, 3.7, 1e5}) invariance = std::max(invariance, std::abs(check_refined_inequality(scaled(m, a)).ratio - r1) / r1);
  }
  const bool ok = change < 0.1 && invariance <= 1e-10;
  return {ok, "max ratio n=32 " + fmt("%.5g", worst[32]) + ", n=64 " + fmt("%.5g", worst[64]) + ", relative change " +
                  fmt("%.4f", change) + " (limit 0.1); single-mode amplitude drift " + fmt("%.2e", invariance) +
                  " (limit 1e-10)"};
}

Outcome criterion5() {
  FieldDrift b(ns_snapshots(1.0));
  FlowOptions opt;
  opt.T = 1.0;
  opt.dt = 0.01;
  opt.save_stride = 5;
  const auto gamma = zero_path(1.0, 0.01);
  constexpr int kBins = 8;
  std::vector<double> lhat;
  for (int m : {16, 32, 64}) lhat.push_back(compressibility_constant(integrate_lattice(b, gamma, m, opt), kBins));
  FunctionDrift control(
      [](double, const Vec3& z) { return Vec3{-kL * std::sin(2.0 * std::numbers::pi * (z.x - kL / 16.0) / kL), 0, 0}; },
      kL);
  const double ctrl = compressibility_constant(integrate_lattice(control, gamma, 64, opt), kBins);
  const bool ok = lhat.back() <= 1.2 && non_increasing(lhat) && lhat[2] < lhat[0] && ctrl > 1.5;
  return {ok, "L-hat on 8^3 bins for m = 16, 32, 64: " + join(lhat) + " (limit 1.2 at m=64, decreasing); control " +
                  fmt("%.3f", ctrl) + " (limit > 1.5)"};
}

Outcome criterion6() {
  const double T = 0.5;
  const std::vector<int> moll{1, 2, 4, 8};
  FlowOptions opt;
  opt.T = T;
  opt.dt = 0.01;
  opt.save_stride = 5;
  const auto gamma = zero_path(T, 0.01);
  const auto x0 = lattice_points(16, kL);
  std::map<int, std::vector<double>> lhs, fitted;
  std::vector<double> conv;
  bool ok = true;
  for (int n : {32, 64}) {
    auto cfg = solver_config(n, 0.05, 0.01, T, 10);
    const auto u0 = random_initial(cfg.grid, 40.0, derive_seed(kMaster, "ns/initial"));
    FieldDrift ref(run(u0, cfg).snapshots);
    std::vector<std::unique_ptr<FieldDrift>> drifts;
    for (int k : moll) {
      cfg.n_moll = k;
      drifts.push_back(std::make_unique<FieldDrift>(run(u0, cfg).snapshots));
      const auto r = stability_gap(*drifts.back(), gamma, ref, gamma, x0, opt, 1.0, 2.0);
      lhs[n].push_back(r.lhs);
      fitted[n].push_back(r.fitted_constant);
    }
    if (n == 32) {
      std::vector<const Drift*> seq;
      std::vector<ForcingPath> gs;
      for (const auto& d : drifts) seq.push_back(d.get()), gs.push_back(gamma);
      conv = flow_convergence_test(seq, gs, ref, gamma, x0, opt, 2.0);
    }
    ok = ok && non_increasing(lhs[n]);
  }
  const double c32 = *std::max_element(fitted[32].begin(), fitted[32].end());
  const double c64 = *std::max_element(fitted[64].begin(), fitted[64].end());
  const double drift = std::max(c32, c64) / std::min(c32, c64);
  // lhs <= C * rhs_opt holds with the fitted C by construction; the check is its stability
  ok = ok && drift < 2.0 && non_increasing(conv) && conv.back() < 10.0 * opt.dt;
  return {ok, "lhs vs n_moll {1,2,4,8}: n=32 " + join(lhs[32]) + ", n=64 " + join(lhs[64]) + "; fitted C " +
                  fmt("%.4g", c32) + " -> " + fmt("%.4g", c64) + " (x" + fmt("%.3f", drift) +
                  ", limit 2); convergence gaps " + join(conv) + " (limit < 0.1)"};
}

Outcome criterion7() {
  const double T = 1.0;
  const auto snaps = ns_snapshots(T);
  // pointwise inequality on the t = 0 field at n = 32 and its exact n = 64 resampling
  const auto w32 = asymmetric_weight(snaps.front().u, std::nullopt, 100000, derive_seed(kMaster, "c7/fit"));
  const double c = w32.c;
  // c is a sample maximum over 1e5 pairs, so fresh violations sit near 1e-5; resolving a change
  // between resolutions needs millions of fresh pairs
  constexpr std::size_t kFresh = 8000000;
  std::vector<double> pointwise;
  std::vector<std::size_t> counts;
  {
    const auto r32 = verify_asymmetric(to_real(snaps.front().u), w32.h, kFresh, derive_seed(kMaster, "c7/fresh32"));
    const auto u64 = upsample(snaps.front().u, 2);
    const auto w64 = asymmetric_weight(u64, c);
    const auto r64 = verify_asymmetric(to_real(u64), w64.h, kFresh, derive_seed(kMaster, "c7/fresh64"));
    pointwise = {r32.violation_fraction, r64.violation_fraction};
    counts = {r32.violations, r64.violations};
  }
  // flow inequality with time-dependent weights on m = 32 and m = 64 lattices
  std::vector<TimedScalar> h;
  for (std::size_t i = 0; i < snaps.size(); i += 2) h.push_back({snaps[i].t, asymmetric_weight(snaps[i].u, c).h});
  std::vector<Snapshot> drift_snaps;
  for (std::size_t i = 0; i < snaps.size(); i += 2) drift_snaps.push_back(snaps[i]);
  FieldDrift b(drift_snaps);
  FlowOptions opt;
  opt.T = T;
  opt.dt = 0.01;
  opt.save_stride = 10;
  std::vector<double> flow;
  WeakTailReport tail;
  for (int m : {32, 64}) {
    const auto e = integrate_lattice(b, zero_path(T, 0.01), m, opt);
    const auto H = flow_weight(h, e);
    flow.push_back(check_flow_lipschitz(e, H).violation_fraction);
    if (m == 64) {
      const double budget = c * time_integral(ns_run().diagnostics, T, [](const DiagnosticsRecord& d) { return d.grad_l31; });
      tail = weak_tail_check(H, budget, kL * kL * kL);
    }
  }
  const bool ok = pointwise.back() < 1e-3 && flow.back() < 1e-2 && pointwise[1] <= pointwise[0] && flow[1] <= flow[0] &&
                  tail.fit_points >= 2 && tail.slope <= -2.5;
  return {ok, "fitted c " + fmt("%.4g", c) + "; pointwise violations n=32,64 " + join(pointwise, "%.2e") + " (" + std::to_string(counts[0]) + " and " +
                  std::to_string(counts[1]) + " of " + std::to_string(kFresh) + ")" +
                  " (limit 1e-3); flow violations m=32,64 " + join(flow, "%.2e") + " (limit 1e-2); weak-L3 tail slope " +
                  fmt("%.3f", tail.slope) + " over " + std::to_string(tail.fit_points) + " points (limit -2.5); H_T quasi-norm / budget " +
                  fmt("%.3g", tail.ratio)};
}

Outcome criterion8() {
  // the t = 0.5 snapshot frozen in time; a horizon of 3 leaves a visible bad set for several iterates
  const double T = 3.0;
  const SpectralVectorField u = ns_snapshots(0.5).back().u;
  FieldDrift b({Snapshot{0.0, u}, Snapshot{T, u}});
  PicardOptions opt;
  opt.T = T;
  opt.dt = 0.02;
  opt.n_iters = 12;
  const auto lat = picard_lattice(b, zero_path(T, 0.02), lattice_points(32, kL), opt);
  std::size_t fast = 0, immediate = 0, z0_bad = 0;
  for (const auto& g : lat.gaps) {
    const auto r = convergence_rate(g, kL);
    if (r.converged_immediately) ++immediate;
    if (r.converged_immediately || r.slope <= -0.8) ++fast;
    if (!(g[0] <= lat.b_sup_integral * (1.0 + 1e-12))) ++z0_bad;
  }
  const double share = double(fast) / double(lat.gaps.size());
  const auto decay = bad_set_measure(lat);
  std::vector<double> fr;
  for (const auto& r : decay.rows) fr.push_back(r.fraction);
  const bool ok = share >= 0.9 && z0_bad == 0 && decay.non_increasing && decay.slope_fit < 0.0;
  return {ok, "share with log-gap slope <= -0.8: " + fmt("%.4f", share) + " (limit 0.9; " + std::to_string(immediate) +
                  " converged at once); Z0 bound violations " + std::to_string(z0_bad) + "; bad-set fractions n=0..12 " +
                  join(fr, "%.3g") + ", log-log slope " + fmt("%.3f", decay.slope_fit) + " (limit < 0)"};
}

Outcome criterion9() {
  const double T = 1.0;
  FieldDrift b(ns_snapshots(T));
  const auto pts = lattice_points(16, kL);
  const std::vector<double> dts{0.02, 0.01, 0.005};
  std::map<std::string, std::vector<double>> fr;
  for (double dt : dts) {
    ProbeOptions opt;
    opt.T = T;
    opt.dt = dt;
    fr["deterministic"].push_back(ae_uniqueness_probe(b, zero_path(T, dts.back()), pts, opt).fraction);
    for (double eps : {0.05, 0.2}) {
      const std::vector<std::uint64_t> seeds{derive_seed(kMaster, "c9/seed0"), derive_seed(kMaster, "c9/seed1")};
      fr["eps=" + fmt("%.2g", eps)].push_back(sde_uniqueness_probe(b, eps, pts, seeds, opt, dts.back()).fraction);
    }
  }
  const auto control = sqrt_singularity_drift(2.0, kL);
  const auto plane = singular_plane_points(16, kL);
  std::vector<double> ctrl;
  for (double dt : dts) {
    ProbeOptions opt;
    opt.T = T;
    opt.dt = dt;
    ctrl.push_back(ae_uniqueness_probe(control, zero_path(T, dts.back()), plane, opt).fraction);
  }
  bool ok = std::all_of(ctrl.begin(), ctrl.end(), [](double f) { return f > 0.05; });
  std::string d;
  for (const auto& [k, v] : fr) {
    ok = ok && non_increasing(v);
    d += k + " " + join(v, "%.3g") + "; ";
  }
  return {ok, "branching fractions at tol = 10 dt for dt = 0.02, 0.01, 0.005: " + d + "square-root control " +
                  join(ctrl, "%.3g") + " (limit > 0.05)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10(const std::filesystem::path& work) {
  using namespace lagflow::harness;
  auto cfg = parse_config(std::filesystem::path(LAGFLOW_SOURCE_DIR) / "configs" / "smoke.cfg");
  cfg.master_seed = kMaster;
  std::vector<RunManifest> ms;
  for (const char* d : {"acceptance_a", "acceptance_b"}) {
    cfg.output_dir = (work / d).string();
    std::filesystem::remove_all(cfg.output_dir);
    ms.push_back(pipeline_paper_check(cfg));
  }
  std::size_t csvs = 0, differing = 0;
  for (const auto& f : ms[0].files)
    if (f.file.ends_with(".csv")) {
      ++csvs;
      differing += slurp(work / "acceptance_a" / f.file) != slurp(work / "acceptance_b" / f.file);
    }

  // lossless binary round trips on a solver field and a Brownian-forced ensemble
  std::size_t mismatches = 0;
  const auto& snap = ns_run().snapshots.back();
  const auto u = to_real(snap.u);
  std::stringstream fs;
  io::write_vector_snapshot(fs, u, snap.t, 0.05);
  io::SnapshotHeader hdr;
  const auto back = io::read_vector_snapshot(fs, &hdr);
  for (int c = 0; c < 3; ++c) mismatches += u.comp[c] != back.comp[c];
  mismatches += hdr.time != snap.t;
  FlowOptions opt;
  opt.T = 0.5;
  opt.dt = 0.01;
  opt.save_stride = 5;
  FieldDrift b(ns_snapshots(0.5));
  const auto e = integrate_lattice(b, sample_brownian(0.5, 0.01, 0.3, kMaster), 8, opt);
  std::stringstream ts;
  io::write_trajectories(ts, e);
  const auto e2 = io::read_trajectories(ts);
  mismatches += e.times != e2.times;
  for (std::size_t s = 0; s < e.positions.size(); ++s)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int d = 0; d < 3; ++d) mismatches += e.positions[s][i][d] != e2.positions[s][i][d];
  const bool ok = csvs >= 8 && differing == 0 && mismatches == 0;
  return {ok, std::to_string(csvs) + " CSVs compared across two identical runs, " + std::to_string(differing) +
                  " differ; LGF1/LGT1 round-trip mismatches " + std::to_string(mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("LAGFLOW_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(std::min(n, omp_get_max_threads()));
  }
  const std::filesystem::path work = std::filesystem::current_path();
  const std::map<int, std::function<Outcome()>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, [&] { return criterion10(work); }},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [k, _] : criteria) selected.push_back(k);

  std::string csv = "criterion,verdict,seconds\n";
  int failures = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 1;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s | %s | %.1f s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
    std::fflush(stdout);
    failures += !o.pass;
    csv += std::to_string(k) + "," + (o.pass ? "pass" : "fail") + "," + fmt("%.1f", sec) + "\n";
  }
  harness::write_file_atomic(work / "acceptance_results.csv", csv);
  return failures == 0 ? 0 : 1;
}
