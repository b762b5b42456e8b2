#include "lagflow/probe/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lagflow/kernels/advect.hpp"

namespace lagflow {

void ProbeOptions::validate() const {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("probe: T and dt must be > 0");
  const double steps = T / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps || std::lround(steps) % 2 != 0)
    throw std::invalid_argument("probe: T / dt must be an even integer");
  if (picard_iters < 1) throw std::invalid_argument("probe: picard_iters must be >= 1");
  if (!(perturbation >= 0.0)) throw std::invalid_argument("probe: perturbation must be >= 0");
}

namespace {

// Y = Z - gamma for an explicit scheme, returned every `every` steps of size h.
std::vector<Vec3> scheme_path(const Drift& b, const ForcingPath& gamma, const Vec3& x, double h, long steps,
                              long every, TimeScheme scheme) {
  const double L = b.box_len();
  auto v = [&](double t, const Vec3& y) { return b.velocity(t, wrap(y + gamma.at(t), L)); };
  std::vector<Vec3> out{x};
  Vec3 y = x;
  for (long k = 0; k < steps; ++k) {
    y = kernels::advance(v, h * double(k), y, h, scheme);
    if ((k + 1) % every == 0) out.push_back(y);
  }
  return out;
}

// Y-form Picard iteration with the trapezoid rule from the start path y0.
std::vector<Vec3> picard_path(const Drift& b, const std::vector<Vec3>& gam, const Vec3& x, double h,
                              std::vector<Vec3> y, int iters) {
  const double L = b.box_len();
  const std::size_t n = y.size();
  std::vector<Vec3> f(n), next(n);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t k = 0; k < n; ++k) f[k] = b.velocity(h * double(k), wrap(y[k] + gam[k], L));
    next[0] = x;
    for (std::size_t k = 0; k + 1 < n; ++k) next[k + 1] = next[k] + (0.5 * h) * (f[k] + f[k + 1]);
    std::swap(y, next);
  }
  return y;
}

bool finite_path(const std::vector<Vec3>& p) {
  return std::all_of(p.begin(), p.end(), [](const Vec3& v) { return is_finite(v); });
}

}  // namespace

CandidateSet multi_scheme_solutions(const Drift& b, const ForcingPath& gamma, const Vec3& x, const ProbeOptions& opt) {
  opt.validate();
  if (gamma.T + 1e-12 < opt.T) throw std::invalid_argument("probe: forcing path shorter than the horizon");
  const long steps = std::lround(opt.T / opt.dt);
  const double h = opt.T / double(steps);
  CandidateSet cs;
  cs.x = x;
  cs.gamma_id = gamma.seed;
  cs.gamma_hash = gamma.hash();

  std::vector<Vec3> gam(steps + 1);
  for (long k = 0; k <= steps; ++k) gam[k] = gamma.at(h * double(k));
  auto coarse = [](const std::vector<Vec3>& fine) {
    std::vector<Vec3> c;
    for (std::size_t k = 0; k < fine.size(); k += 2) c.push_back(fine[k]);
    return c;
  };

  std::vector<std::pair<std::string, std::vector<Vec3>>> ys;
  ys.emplace_back("rk4_dt", scheme_path(b, gamma, x, h, steps, 2, TimeScheme::rk4));
  ys.emplace_back("rk4_2dt", scheme_path(b, gamma, x, 2.0 * h, steps / 2, 1, TimeScheme::rk4));
  ys.emplace_back("euler_dt", scheme_path(b, gamma, x, h, steps, 2, TimeScheme::euler));
  ys.emplace_back("picard", coarse(picard_path(b, gam, x, h, std::vector<Vec3>(steps + 1, x), opt.picard_iters)));
  std::vector<Vec3> bumped(steps + 1);
  const Vec3 dir = (1.0 / std::sqrt(3.0)) * Vec3{1.0, 1.0, 1.0};
  for (long k = 0; k <= steps; ++k)
    bumped[k] = x + (opt.perturbation * std::sin(std::numbers::pi * double(k) / double(steps))) * dir;
  ys.emplace_back("picard_perturbed", coarse(picard_path(b, gam, x, h, bumped, opt.picard_iters)));

  if (gamma.hash() != cs.gamma_hash) throw std::logic_error("probe: forcing path changed while building candidates");

  for (long k = 0; k <= steps; k += 2) cs.times.push_back(h * double(k));
  for (auto& [name, y] : ys) {
    if (!finite_path(y)) {
      cs.excluded.push_back(name);
      continue;
    }
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = y[k] + gam[2 * k];
    cs.names.push_back(name);
    cs.candidates.push_back(std::move(y));
  }
  for (std::size_t a = 0; a < cs.candidates.size(); ++a)
    for (std::size_t c = a + 1; c < cs.candidates.size(); ++c)
      for (std::size_t k = 0; k < cs.times.size(); ++k)
        cs.spread = std::max(cs.spread, norm(cs.candidates[a][k] - cs.candidates[c][k]));
  return cs;
}

namespace {

UniquenessReport probe_paths(const Drift& b, const std::vector<ForcingPath>& paths,
                             const std::vector<std::uint64_t>& seeds, const std::vector<Vec3>& points,
                             const ProbeOptions& opt) {
  opt.validate();
  if (points.empty()) throw std::invalid_argument("probe: empty point set");
  UniquenessReport rep;
  rep.tol = opt.tolerance();
  rep.dt = opt.dt;
  const std::size_t np = points.size(), ns = paths.size();
  rep.rows.resize(np * ns);
  std::vector<std::size_t> excluded(np * ns, 0);
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(np * ns);
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t r = 0; r < total; ++r) {
    const std::size_t s = std::size_t(r) / np, i = std::size_t(r) % np;
    try {
      const auto cs = multi_scheme_solutions(b, paths[s], points[i], opt);
      ProbeRow row;
      row.x_index = i;
      row.seed = seeds[s];
      row.spread = cs.spread;
      row.tol = rep.tol;
      row.dt = opt.dt;
      row.passed = cs.spread <= rep.tol && cs.candidates.size() >= 3;
      rep.rows[r] = row;
      excluded[r] = cs.excluded.size();
    } catch (const std::exception& ex) {
#pragma omp critical(lagflow_probe_error)
      {
        if (!failed) message = ex.what();
        failed = true;
      }
    }
  }
  if (failed) throw std::runtime_error(message);

  rep.per_seed_fraction.assign(ns, 0.0);
  rep.per_x_fraction.assign(np, 0.0);
  std::size_t bad = 0;
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t i = 0; i < np; ++i) {
      const bool branch = !rep.rows[s * np + i].passed;
      bad += branch;
      rep.per_seed_fraction[s] += branch ? 1.0 / double(np) : 0.0;
      rep.per_x_fraction[i] += branch ? 1.0 / double(ns) : 0.0;
      rep.excluded_members += excluded[s * np + i];
    }
  rep.fraction = double(bad) / double(np * ns);
  return rep;
}

}  // namespace

UniquenessReport ae_uniqueness_probe(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& points,
                                     const ProbeOptions& opt) {
  return probe_paths(b, {gamma}, {gamma.seed}, points, opt);
}

UniquenessReport sde_uniqueness_probe(const Drift& b, double epsilon, const std::vector<Vec3>& points,
                                      const std::vector<std::uint64_t>& seeds, const ProbeOptions& opt,
                                      double path_dt) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("probe: epsilon must be >= 0");
  if (seeds.empty()) throw std::invalid_argument("probe: no seeds");
  const double pdt = path_dt > 0.0 ? path_dt : opt.dt;
  std::vector<ForcingPath> paths;
  for (auto s : seeds) paths.push_back(sample_brownian(opt.T, pdt, epsilon, s));
  return probe_paths(b, paths, seeds, points, opt);
}

FunctionDrift sqrt_singularity_drift(double c, double box_len) {
  if (!(box_len > 0.0)) throw std::invalid_argument("sqrt_singularity_drift: box_len must be > 0");
  return FunctionDrift(
      [c, box_len](double, const Vec3& z) {
        const double d = z.x - 0.5 * box_len;
        return Vec3{c * std::copysign(std::sqrt(std::abs(d)), d), 0.0, 0.0};
      },
      box_len);
}

std::vector<Vec3> singular_plane_points(int m, double box_len) {
  if (m < 1) throw std::invalid_argument("singular_plane_points: m must be >= 1");
  std::vector<Vec3> pts;
  const double h = box_len / m;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) pts.push_back({0.5 * box_len, (j + 0.5) * h, (k + 0.5) * h});
  return pts;
}

}  // namespace lagflow
