#include "lagflow/picard/picard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/spectral_ops.hpp"
#include "lagflow/flow/flow.hpp"
#include "lagflow/kernels/advect.hpp"

namespace lagflow {

void PicardOptions::validate() const {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("picard: T and dt must be > 0");
  if (n_iters < 1) throw std::invalid_argument("picard: n_iters must be >= 1");
  if (save_stride < 1) throw std::invalid_argument("picard: save_stride must be >= 1");
}

namespace {

struct Grid1 {
  long steps = 0;
  double h = 0.0;
  double t(long k) const { return h * double(k); }
};

Grid1 time_grid(const PicardOptions& opt, const ForcingPath& gamma) {
  opt.validate();
  if (gamma.T + 1e-12 < opt.T) throw std::invalid_argument("picard: forcing path shorter than the horizon");
  Grid1 g;
  g.steps = std::max(1L, std::lround(opt.T / opt.dt));
  g.h = opt.T / double(g.steps);
  return g;
}

// Y-form reference trajectory (Y = X - gamma) on the quadrature grid, `sub` RK4 substeps per step.
std::vector<Vec3> reference_path(const Drift& b, const ForcingPath& gamma, const Vec3& x, const Grid1& g, int sub) {
  const double L = b.box_len();
  auto v = [&](double t, const Vec3& y) { return b.velocity(t, wrap(y + gamma.at(t), L)); };
  std::vector<Vec3> y(g.steps + 1);
  y[0] = x;
  const double hs = g.h / sub;
  Vec3 cur = x;
  for (long k = 0; k < g.steps; ++k) {
    for (int s = 0; s < sub; ++s) cur = kernels::advance(v, g.t(k) + hs * s, cur, hs, TimeScheme::rk4);
    if (!is_finite(cur)) throw std::runtime_error("picard: non-finite reference trajectory");
    y[k + 1] = cur;
  }
  return y;
}

// One application of F in Y-form: Y^{new}_k = x + trapezoid int_0^{t_k} b(Y^{old} + gamma).
void picard_map(const Drift& b, const std::vector<Vec3>& gam, const Vec3& x, const Grid1& g,
                const std::vector<Vec3>& in, std::vector<Vec3>& out, std::vector<Vec3>& f) {
  const double L = b.box_len();
  for (long k = 0; k <= g.steps; ++k) f[k] = b.velocity(g.t(k), wrap(in[k] + gam[k], L));
  out[0] = x;
  for (long k = 0; k < g.steps; ++k) out[k + 1] = out[k] + (0.5 * g.h) * (f[k] + f[k + 1]);
}

double sup_distance_paths(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, norm(a[k] - b[k]));
  return s;
}

double sample_weight(const std::vector<TimedScalar>& h, double t, const Vec3& z) {
  if (h.size() == 1) return sample_trilinear(h[0].f, z);
  if (t <= h.front().t) return sample_trilinear(h.front().f, z);
  if (t >= h.back().t) return sample_trilinear(h.back().f, z);
  std::size_t hi = 1;
  while (h[hi].t < t) ++hi;
  const double w = (t - h[hi - 1].t) / (h[hi].t - h[hi - 1].t);
  return (1.0 - w) * sample_trilinear(h[hi - 1].f, z) + w * sample_trilinear(h[hi].f, z);
}

}  // namespace

double sup_norm_integral(const FieldDrift& b, double T) {
  std::vector<double> sups;
  if (!b.node_values().empty()) {
    for (const auto& f : b.node_values()) sups.push_back(sup_norm(f));
  } else {
    for (const auto& s : b.snapshots()) sups.push_back(sup_norm(to_real(s.u)));
  }
  const auto& sn = b.snapshots();
  if (sups.size() == 1) return sups[0] * T;
  // exact integral over [0, T] of the piecewise-linear envelope, constant outside the snapshot range
  double total = 0.0;
  if (sn.front().t > 0.0) total += sups.front() * std::min(T, sn.front().t);
  for (std::size_t i = 0; i + 1 < sn.size(); ++i) {
    const double a = std::max(0.0, sn[i].t), c = std::min(T, sn[i + 1].t);
    if (c <= a) continue;
    const double span = sn[i + 1].t - sn[i].t;
    auto env = [&](double t) { return sups[i] + (sups[i + 1] - sups[i]) * (t - sn[i].t) / span; };
    total += 0.5 * (env(a) + env(c)) * (c - a);
  }
  if (T > sn.back().t) total += sups.back() * (T - std::max(0.0, sn.back().t));
  return total;
}

PicardRun picard_iterate(const Drift& b, const ForcingPath& gamma, const Vec3& x, const PicardOptions& opt,
                         const std::vector<TimedScalar>* weight) {
  const Grid1 g = time_grid(opt, gamma);
  const double L = b.box_len();
  PicardRun run;
  run.x = x;

  std::vector<Vec3> gam(g.steps + 1);
  for (long k = 0; k <= g.steps; ++k) gam[k] = gamma.at(g.t(k));
  const auto ref = reference_path(b, gamma, x, g, 4);
  if (opt.cross_check) run.reference_check = sup_distance_paths(ref, reference_path(b, gamma, x, g, 8));
  if (const auto* fd = dynamic_cast<const FieldDrift*>(&b)) run.b_sup_integral = sup_norm_integral(*fd, opt.T);

  std::vector<double> decay;
  if (weight != nullptr) {
    if (weight->empty()) throw std::invalid_argument("picard: empty weight sequence");
    std::vector<double> hv(g.steps + 1);
    for (long k = 0; k <= g.steps; ++k) hv[k] = sample_weight(*weight, g.t(k), wrap(ref[k] + gam[k], L));
    decay.assign(g.steps + 1, 1.0);
    double H = 0.0;
    for (long k = 0; k < g.steps; ++k) {
      H += 0.5 * g.h * (hv[k] + hv[k + 1]);
      decay[k + 1] = std::exp(-std::numbers::e * H);
    }
    run.h_T = H;
  }

  for (long k = 0; k <= g.steps; k += opt.save_stride) {
    run.times.push_back(g.t(k));
    run.reference.push_back(ref[k] + gam[k]);
  }
  const bool last_saved = g.steps % opt.save_stride == 0;
  if (!last_saved) {
    run.times.push_back(g.t(g.steps));
    run.reference.push_back(ref[g.steps] + gam[g.steps]);
  }

  auto record = [&](const std::vector<Vec3>& y) {
    double gap = 0.0, wgap = 0.0;
    for (long k = 0; k <= g.steps; ++k) {
      const double d = norm(y[k] - ref[k]);
      gap = std::max(gap, d);
      if (!decay.empty()) wgap = std::max(wgap, decay[k] * d);
    }
    run.gaps.push_back(gap);
    if (!decay.empty()) run.weighted_gaps.push_back(wgap);
    std::vector<Vec3> saved;
    for (long k = 0; k <= g.steps; k += opt.save_stride) saved.push_back(y[k] + gam[k]);
    if (!last_saved) saved.push_back(y[g.steps] + gam[g.steps]);
    run.iterates.push_back(std::move(saved));
  };

  std::vector<Vec3> cur(g.steps + 1, x), next(g.steps + 1), again(g.steps + 1), f(g.steps + 1);
  record(cur);
  for (int n = 0; n < opt.n_iters; ++n) {
    picard_map(b, gam, x, g, cur, next, f);
    for (const auto& p : next)
      if (!is_finite(p)) throw std::runtime_error("picard: non-finite value in iterate " + std::to_string(n + 1));
    picard_map(b, gam, x, g, cur, again, f);
    run.residual = std::max(run.residual, sup_distance_paths(next, again));
    std::swap(cur, next);
    record(cur);
  }
  return run;
}

PicardRate convergence_rate(const std::vector<double>& gaps, double scale) {
  if (gaps.size() < 2) throw std::invalid_argument("convergence_rate: need at least two iterates");
  PicardRate r;
  const double roundoff = 1e-12 * std::max({1.0, scale, gaps[0]});
  // Picard converges to the trapezoid solution, so the last gap measures the discretization floor.
  r.floor = std::max(roundoff, gaps.back());
  const double level = 10.0 * r.floor;
  std::vector<int> idx;
  for (int n = 0; n < int(gaps.size()); ++n) {
    if (gaps[n] > level) idx.push_back(n);
    else break;
  }
  if (idx.size() < 2) {
    r.converged_immediately = true;
    r.fit_last = idx.empty() ? 0 : idx.back();
    r.slope = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n : idx) {
    const double y = std::log(gaps[n]);
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
    r.weighted_sup = std::max(r.weighted_sup, std::exp(double(n)) * gaps[n]);
  }
  const double k = double(idx.size());
  r.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  r.fit_first = idx.front();
  r.fit_last = idx.back();
  return r;
}

PicardRate convergence_rate(const PicardRun& run) {
  if (run.gaps.size() < 6) throw std::invalid_argument("convergence_rate: need at least five iterates");
  PicardRate r = convergence_rate(run.gaps, norm(run.x));
  if (std::isfinite(run.b_sup_integral)) {
    r.z0_bound_holds = run.gaps[0] <= run.b_sup_integral * (1.0 + 1e-12) + 1e-14;
    if (std::isfinite(run.h_T)) r.bound_rhs = std::exp(std::numbers::e * run.h_T) * run.b_sup_integral;
  }
  if (!run.weighted_gaps.empty() && !r.converged_immediately) {
    double worst = 0.0;
    for (int n = r.fit_first; n < r.fit_last; ++n)
      if (run.weighted_gaps[n] > 0.0) worst = std::max(worst, run.weighted_gaps[n + 1] / run.weighted_gaps[n]);
    r.contraction = worst;
  }
  return r;
}

PicardLattice picard_lattice(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& points,
                             const PicardOptions& opt) {
  const Grid1 g = time_grid(opt, gamma);
  PicardLattice out;
  out.points = points;
  out.n_iters = opt.n_iters;
  out.gaps.assign(points.size(), {});
  if (const auto* fd = dynamic_cast<const FieldDrift*>(&b)) out.b_sup_integral = sup_norm_integral(*fd, opt.T);
  std::vector<Vec3> gam(g.steps + 1);
  for (long k = 0; k <= g.steps; ++k) gam[k] = gamma.at(g.t(k));

  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(points.size());
  bool failed = false;
  std::string message;
#pragma omp parallel
  {
    std::vector<Vec3> cur(g.steps + 1), next(g.steps + 1), f(g.steps + 1);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        const Vec3& x = points[i];
        const auto ref = reference_path(b, gamma, x, g, 4);
        auto& gaps = out.gaps[i];
        gaps.reserve(opt.n_iters + 1);
        std::fill(cur.begin(), cur.end(), x);
        gaps.push_back(sup_distance_paths(cur, ref));
        for (int n = 0; n < opt.n_iters; ++n) {
          picard_map(b, gam, x, g, cur, next, f);
          std::swap(cur, next);
          const double gap = sup_distance_paths(cur, ref);
          if (!std::isfinite(gap)) throw std::runtime_error("picard: non-finite value in iterate " + std::to_string(n + 1));
          gaps.push_back(gap);
        }
      } catch (const std::exception& ex) {
#pragma omp critical(lagflow_picard_error)
        {
          if (!failed) message = ex.what();
          failed = true;
        }
      }
    }
  }
  if (failed) throw std::runtime_error(message);
  return out;
}

double ThresholdRule::at(int n) const {
  return kind == ThresholdKind::exp_half ? scale * std::exp(-0.5 * n) : scale;
}

DecayTable bad_set_measure(const PicardLattice& lattice, const ThresholdRule& rule) {
  DecayTable t;
  const double total = double(lattice.points.size());
  if (total == 0) throw std::invalid_argument("bad_set_measure: empty lattice");
  std::vector<double> lx, ly;
  for (int n = 0; n <= lattice.n_iters; ++n) {
    DecayRow row;
    row.n = n;
    row.threshold = rule.at(n);
    std::size_t bad = 0;
    for (const auto& g : lattice.gaps) bad += g[n] > row.threshold ? 1 : 0;
    row.fraction = double(bad) / total;
    if (!t.rows.empty() && row.fraction > t.rows.back().fraction) t.non_increasing = false;
    if (n >= 1 && row.fraction > 0.0 && row.fraction < 1.0) {
      lx.push_back(double(n));
      ly.push_back(row.fraction);
    }
    t.rows.push_back(row);
  }
  if (lx.size() >= 2) t.slope_fit = loglog_slope(lx, ly);
  return t;
}

}  // namespace lagflow
