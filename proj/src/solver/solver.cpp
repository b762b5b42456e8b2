#include "lagflow/solver/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/modes.hpp"
#include "lagflow/field/random_fields.hpp"
#include "lagflow/field/spectral_ops.hpp"

namespace lagflow {

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
  if (n_moll < 0) throw std::invalid_argument("n_moll must be >= 0 (0 disables mollification)");
  if (snapshot_count < 1) throw std::invalid_argument("snapshot_count must be >= 1");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  Grid3 check(grid.n, grid.box_len);
  (void)check;
}

SpectralVectorField nonlinear_term(const SpectralVectorField& u, const SolverConfig& cfg) {
  const Grid3& g = u.grid;
  const std::ptrdiff_t N = static_cast<std::ptrdiff_t>(g.nodes());
  RealVectorField adv(g);

  if (cfg.n_moll == 0) {
    // Unmollified transport: (u.grad)u = grad(|u|^2/2) - u x curl u, and the
    // projection removes the gradient. Six inverse transforms instead of twelve.
    const SpectralField<9> du = spectral_gradient(u);
    SpectralVectorField w(g);
    for (std::size_t i = 0; i < g.modes(); ++i) {
      w.comp[0][i] = du.comp[7][i] - du.comp[5][i];
      w.comp[1][i] = du.comp[2][i] - du.comp[6][i];
      w.comp[2][i] = du.comp[3][i] - du.comp[1][i];
    }
    const RealVectorField a = to_real(u);
    const RealVectorField om = to_real(w);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < N; ++p) {
      adv.comp[0][p] = a.comp[1][p] * om.comp[2][p] - a.comp[2][p] * om.comp[1][p];
      adv.comp[1][p] = a.comp[2][p] * om.comp[0][p] - a.comp[0][p] * om.comp[2][p];
      adv.comp[2][p] = a.comp[0][p] * om.comp[1][p] - a.comp[1][p] * om.comp[0][p];
    }
  } else {
    const RealVectorField a = to_real(mollify(u, cfg.n_moll));
    const TensorField du = gradient(u);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < N; ++p) {
      for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += a.comp[j][p] * du.comp[3 * i + j][p];
        adv.comp[i][p] = -s;
      }
    }
  }
  SpectralVectorField out = to_spectral(adv);
  if (cfg.dealias) out = dealias(out);
  return leray_project(out);
}

namespace {

void heun_substep(SpectralVectorField& u, const SolverConfig& cfg, double h) {
  const Grid3& g = u.grid;
  std::vector<double> E(g.modes());
  for_each_mode(g, [&](const ModeInfo& m) { E[m.index] = std::exp(-cfg.nu * m.k2() * h); });

  const SpectralVectorField n1 = nonlinear_term(u, cfg);
  SpectralVectorField mid(g);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < E.size(); ++i) mid.comp[c][i] = E[i] * (u.comp[c][i] + h * n1.comp[c][i]);
  mid.divergence_free = true;

  const SpectralVectorField n2 = nonlinear_term(mid, cfg);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < E.size(); ++i)
      u.comp[c][i] = E[i] * u.comp[c][i] + 0.5 * h * (E[i] * n1.comp[c][i] + n2.comp[c][i]);
  // Cancellation can leave round-off modes whose relative divergence is O(1).
  u = leray_project(u);
}

bool all_finite(const SpectralVectorField& u) {
  for (const auto& c : u.comp)
    for (const auto& v : c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

StepResult step(const SpectralVectorField& u, const SolverConfig& cfg) {
  const double umax = sup_norm(to_real(u));
  const double limit = umax > 0.0 ? 0.5 * u.grid.spacing() / umax : cfg.dt;
  int halvings = 0;
  while (cfg.dt / double(1 << halvings) > limit) {
    if (++halvings > cfg.max_halvings) {
      std::ostringstream msg;
      msg << "CFL: dt=" << cfg.dt << " needs more than " << cfg.max_halvings << " halvings (max|u|=" << umax << ")";
      throw std::runtime_error(msg.str());
    }
  }
  StepResult r{u, 1 << halvings};
  const double h = cfg.dt / r.substeps;
  for (int s = 0; s < r.substeps; ++s) heun_substep(r.u, cfg, h);
  if (!all_finite(r.u)) {
    std::ostringstream msg;
    msg << "non-finite velocity after step: dt=" << cfg.dt << " substeps=" << r.substeps << " max|u| before=" << umax
        << " energy before=" << std::pow(sobolev_norm(u, 0.0), 2);
    throw std::runtime_error(msg.str());
  }
  return r;
}

DiagnosticsRecord diagnostics(const SpectralVectorField& u, double t) {
  DiagnosticsRecord d;
  d.t = t;
  const double e = sobolev_norm(u, 0.0);
  const double z = sobolev_norm(u, 1.0);
  d.energy = e * e;
  d.enstrophy = z * z;
  d.h2 = sobolev_norm(u, 2.0);
  d.grad_l31 = lorentz_norm(magnitude(gradient(u)), 3.0, 1.0);
  d.fl1 = fourier_lebesgue_norm(u);
  return d;
}

RunResult run(const SpectralVectorField& u0, const SolverConfig& cfg) {
  cfg.validate();
  if (!(u0.grid == cfg.grid)) throw std::invalid_argument("initial data grid differs from solver grid");
  const long steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
  SolverConfig c = cfg;
  c.dt = cfg.t_end / double(steps);

  std::vector<long> snap_at;
  for (int j = 0; j <= cfg.snapshot_count; ++j) {
    const long s = std::lround(double(j) * double(steps) / cfg.snapshot_count);
    if (snap_at.empty() || snap_at.back() != s) snap_at.push_back(s);
  }

  RunResult r;
  SpectralVectorField u = u0;
  u.divergence_free = true;
  std::size_t next_snap = 0;
  for (long s = 0;; ++s) {
    const double t = double(s) * c.dt;
    if (next_snap < snap_at.size() && snap_at[next_snap] == s) {
      r.snapshots.push_back({t, u});
      ++next_snap;
    }
    if (s == steps) {
      r.diagnostics.push_back(diagnostics(u, t));
      break;
    }
    r.diagnostics.push_back(diagnostics(u, t));
    StepResult sr = step(u, c);
    r.diagnostics.back().substeps = sr.substeps;
    if (sr.substeps > 1) ++r.cfl_events;
    u = std::move(sr.u);
  }
  return r;
}

double time_integral(const std::vector<DiagnosticsRecord>& diag, double T,
                     const std::function<double(const DiagnosticsRecord&)>& g) {
  double sum = 0.0;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (diag[i].t > T * (1.0 + 1e-12)) break;
    sum += 0.5 * (diag[i].t - diag[i - 1].t) * (g(diag[i]) + g(diag[i - 1]));
  }
  return sum;
}

InequalityReport check_energy_inequality(const std::vector<DiagnosticsRecord>& diag, double nu, double tol) {
  std::vector<double> I(diag.size(), 0.0);
  for (std::size_t i = 1; i < diag.size(); ++i)
    I[i] = I[i - 1] + 0.5 * (diag[i].t - diag[i - 1].t) * (diag[i].enstrophy + diag[i - 1].enstrophy);

  InequalityReport worst = make_report(0.0, 0.0, tol);
  double worst_excess = -kInf;
  for (std::size_t s = 0; s < diag.size(); ++s) {
    for (std::size_t t = s + 1; t < diag.size(); ++t) {
      const double lhs = diag[t].energy + 2.0 * nu * (I[t] - I[s]);
      const double rhs = diag[s].energy;
      // Compare on the relative scale of the starting energy.
      const double excess = rhs > 0.0 ? lhs / rhs - 1.0 : (lhs > 0.0 ? kInf : -1.0);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = make_report(lhs, rhs, tol);
      }
    }
  }
  return worst;
}

InequalityReport check_fgt_bound(const std::vector<DiagnosticsRecord>& diag, double u0_energy, double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("FGT bound requires T >= 1");
  const double lhs = time_integral(diag, T, [](const DiagnosticsRecord& d) { return std::cbrt(d.h2 * d.h2); });
  const double rhs = (1.0 + u0_energy) * std::cbrt(T);
  InequalityReport r = make_report(lhs, rhs, kInf);
  r.passed = std::isfinite(r.ratio);
  return r;
}

InequalityReport check_gradient_lorentz_integral(const std::vector<DiagnosticsRecord>& diag, double u0_energy,
                                                 double T) {
  if (!(T >= 1.0)) throw std::invalid_argument("gradient Lorentz bound requires T >= 1");
  const double lhs = time_integral(diag, T, [](const DiagnosticsRecord& d) { return d.grad_l31 + d.fl1; });
  const double rhs = std::sqrt(std::sqrt(u0_energy)) * std::pow(1.0 + u0_energy, 0.75) * std::pow(T, 0.25);
  InequalityReport r = make_report(lhs, rhs, kInf);
  r.passed = std::isfinite(r.ratio);
  return r;
}

double l2t_l2_distance(const std::vector<Snapshot>& a, const std::vector<Snapshot>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("snapshot sequences differ in length");
  std::vector<double> d2(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].t - b[i].t) > 1e-12 * std::max(1.0, std::abs(a[i].t)))
      throw std::invalid_argument("snapshot times differ");
    const double d = sobolev_norm(axpby(1.0, a[i].u, -1.0, b[i].u), 0.0);
    d2[i] = d * d;
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) sum += 0.5 * (a[i].t - a[i - 1].t) * (d2[i] + d2[i - 1]);
  return std::sqrt(sum);
}

InitialKind parse_initial_kind(const std::string& s) {
  if (s == "taylor_green") return InitialKind::taylor_green;
  if (s == "shear") return InitialKind::shear;
  if (s == "random_band") return InitialKind::random_band;
  throw std::invalid_argument("unknown initial data kind '" + s + "'");
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::taylor_green: return "taylor_green";
    case InitialKind::shear: return "shear";
    case InitialKind::random_band: return "random_band";
  }
  return "?";
}

SpectralVectorField make_initial_data(InitialKind kind, const Grid3& g, const InitialDataParams& p,
                                      std::uint64_t seed) {
  const double k0 = 2.0 * std::numbers::pi / g.box_len;
  const double h = g.spacing();
  switch (kind) {
    case InitialKind::taylor_green: {
      RealVectorField f(g);
      for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
          for (int i = 0; i < g.n; ++i) {
            const double x = k0 * i * h, y = k0 * j * h, z = k0 * k * h;
            const std::size_t idx = g.node(i, j, k);
            f.comp[0][idx] = p.amplitude * std::sin(x) * std::cos(y) * std::cos(z);
            f.comp[1][idx] = -p.amplitude * std::cos(x) * std::sin(y) * std::cos(z);
          }
      return leray_project(to_spectral(f));
    }
    case InitialKind::shear: {
      if (p.mode < 1 || p.mode > g.n / 3) throw std::invalid_argument("shear mode must lie in [1, n/3]");
      RealVectorField f(g);
      for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
          for (int i = 0; i < g.n; ++i) f.comp[1][g.node(i, j, k)] = p.amplitude * std::sin(k0 * p.mode * i * h);
      return leray_project(to_spectral(f));
    }
    case InitialKind::random_band: {
      SpectralVectorField u = random_band_vector(g, {p.k_min, p.k_max, p.slope}, seed, true);
      const double e = spectral_energy(u);
      if (e == 0.0) throw std::invalid_argument("random band produced a zero field");
      const double s = p.energy >= 0.0 ? std::sqrt(p.energy / e) : p.amplitude;
      return scaled(u, s);
    }
  }
  throw std::invalid_argument("unknown initial data kind");
}

}  // namespace lagflow
