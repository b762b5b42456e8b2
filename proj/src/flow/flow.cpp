#include "lagflow/flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/spectral_ops.hpp"
#include "lagflow/kernels/advect.hpp"

namespace lagflow {

TimeScheme parse_scheme(const std::string& s) {
  if (s == "rk4") return TimeScheme::rk4;
  if (s == "euler") return TimeScheme::euler;
  throw std::invalid_argument("unknown time scheme '" + s + "'");
}

std::vector<Vec3> lattice_points(int m, double box_len) {
  if (m < 1) throw std::invalid_argument("lattice size must be >= 1");
  std::vector<Vec3> pts;
  pts.reserve(std::size_t(m) * m * m);
  const double h = box_len / m;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) pts.push_back({(i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h});
  return pts;
}

ParticleEnsemble integrate_flow(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                                const FlowOptions& opt) {
  return kernels::advect_omp(b, gamma, x0, opt);
}

ParticleEnsemble integrate_lattice(const Drift& b, const ForcingPath& gamma, int m, const FlowOptions& opt) {
  if (b.box_len() <= 0.0) throw std::invalid_argument("lattice flows need a periodic drift");
  ParticleEnsemble e = integrate_flow(b, gamma, lattice_points(m, b.box_len()), opt);
  e.m = m;
  return e;
}

double compressibility_constant(const ParticleEnsemble& e, int c) {
  if (e.size() == 0 || e.positions.empty()) throw std::invalid_argument("compressibility of an empty ensemble");
  if (c == 0) c = std::max(1, e.m / 4);
  if (c < 1) throw std::invalid_argument("bins per axis must be >= 1");
  const double L = e.box_len;
  if (L <= 0.0) throw std::invalid_argument("compressibility needs a periodic box");
  std::vector<std::size_t> count(std::size_t(c) * c * c, 0);
  for (const Vec3& x : e.final_positions()) {
    int idx[3];
    for (int d = 0; d < 3; ++d) idx[d] = std::clamp(static_cast<int>(std::floor(wrap_coord(x[d], L) / L * c)), 0, c - 1);
    ++count[idx[0] + std::size_t(c) * (idx[1] + std::size_t(c) * idx[2])];
  }
  const double mean = double(e.size()) / double(count.size());
  return double(*std::max_element(count.begin(), count.end())) / mean;
}

std::vector<double> sup_gaps(const ParticleEnsemble& a, const ParticleEnsemble& b) {
  if (a.size() != b.size() || a.positions.size() != b.positions.size())
    throw std::invalid_argument("sup_gaps: ensembles differ in shape");
  const double L = a.box_len;
  std::vector<double> g(a.size(), 0.0);
  for (std::size_t s = 0; s < a.positions.size(); ++s)
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = std::max(g[i], periodic_distance(a.positions[s][i], b.positions[s][i], L));
  return g;
}

std::pair<double, double> optimize_lambda(double A, double B) {
  if (!(A > 0.0)) return {kInf, 0.0};
  if (!(B > 0.0)) return {0.0, A};
  // The minimizer solves lambda^2 e^lambda = B / A; the left side increases on (0, inf).
  const double target = std::log(B / A);
  double lo = 1e-12, hi = 1e3;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (2.0 * std::log(mid) + mid < target) lo = mid;
    else hi = mid;
  }
  const double lam = std::sqrt(lo * hi);
  return {lam, std::exp(lam) * A + B / lam};
}

namespace {

double normalized_lp(const ScalarField& f, double p) {
  double s = 0.0;
  for (double v : f.comp[0]) s += std::pow(std::abs(v), p);
  return std::pow(s / double(f.comp[0].size()), 1.0 / p);
}

double snapshot_lp(const SpectralVectorField& u, double p, bool gradient_of) {
  return normalized_lp(gradient_of ? magnitude(gradient(u)) : magnitude(to_real(u)), p);
}

double integrate_snapshots(const std::vector<Snapshot>& s, double T, const std::function<double(const Snapshot&)>& g) {
  if (s.size() == 1) return T * g(s[0]);
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = g(s[i]);
  double sum = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].t > T * (1.0 + 1e-12)) break;
    sum += 0.5 * (s[i].t - s[i - 1].t) * (v[i] + v[i - 1]);
  }
  return sum;
}

}  // namespace

double time_integrated_lp(const std::vector<Snapshot>& s, double T, double p, bool gradient_of) {
  return integrate_snapshots(s, T, [&](const Snapshot& x) { return snapshot_lp(x.u, p, gradient_of); });
}

StabilityReport stability_gap(const FieldDrift& b1, const ForcingPath& g1, const FieldDrift& b2, const ForcingPath& g2,
                              const std::vector<Vec3>& x0, const FlowOptions& opt, double lambda, double p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("stability_gap: lambda must be > 0");
  if (!(p >= 1.0)) throw std::invalid_argument("stability_gap: p must be >= 1");
  const auto& s1 = b1.snapshots();
  const auto& s2 = b2.snapshots();
  if (s1.size() != s2.size()) throw std::invalid_argument("stability_gap: drifts have different snapshot counts");

  StabilityReport r;
  r.lambda = lambda;
  const auto X1 = integrate_flow(b1, g1, x0, opt);
  const auto X2 = integrate_flow(b2, g2, x0, opt);
  double acc = 0.0;
  for (double g : sup_gaps(X1, X2)) acc += std::pow(std::min(1.0, g), p);
  r.lhs = std::pow(acc / double(x0.size()), 1.0 / p);

  std::vector<Snapshot> diff(s1.size());
  for (std::size_t i = 0; i < s1.size(); ++i) diff[i] = {s1[i].t, axpby(1.0, s1[i].u, -1.0, s2[i].u)};
  r.drift_gap = time_integrated_lp(diff, opt.T, p, false);
  r.forcing_gap = sup_distance(g1, g2);
  r.gradient_budget = time_integrated_lp(s1, opt.T, p, true);
  r.rhs = std::exp(lambda) * (r.drift_gap + r.forcing_gap) + r.gradient_budget / lambda;
  std::tie(r.lambda_opt, r.rhs_opt) = optimize_lambda(r.drift_gap + r.forcing_gap, r.gradient_budget);
  r.fitted_constant = r.rhs_opt > 0.0 ? r.lhs / r.rhs_opt : (r.lhs == 0.0 ? 0.0 : kInf);
  return r;
}

std::vector<double> flow_convergence_test(const std::vector<const Drift*>& b_seq,
                                          const std::vector<ForcingPath>& gamma_seq, const Drift& b_limit,
                                          const ForcingPath& gamma_limit, const std::vector<Vec3>& x0,
                                          const FlowOptions& opt, double p) {
  if (b_seq.size() != gamma_seq.size()) throw std::invalid_argument("flow_convergence_test: sequence lengths differ");
  const auto X = integrate_flow(b_limit, gamma_limit, x0, opt);
  std::vector<double> gaps;
  for (std::size_t n = 0; n < b_seq.size(); ++n) {
    const auto Xn = integrate_flow(*b_seq[n], gamma_seq[n], x0, opt);
    double acc = 0.0;
    for (double g : sup_gaps(Xn, X)) acc += std::pow(g, p);
    gaps.push_back(std::pow(acc / double(x0.size()), 1.0 / p));
  }
  return gaps;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lagflow
