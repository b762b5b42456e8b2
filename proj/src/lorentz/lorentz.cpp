#include "lagflow/lorentz/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/modes.hpp"
#include "lagflow/field/spectral_ops.hpp"

namespace lagflow {

double EmpiricalDistribution::measure_above(double r) const {
  // sorted descending: count entries strictly greater than r
  auto it = std::partition_point(sorted_magnitudes.begin(), sorted_magnitudes.end(),
                                 [r](double a) { return a > r; });
  return cell_volume * static_cast<double>(it - sorted_magnitudes.begin());
}

EmpiricalDistribution make_distribution(std::span<const double> values, double cell_volume) {
  if (!(cell_volume > 0.0)) throw std::invalid_argument("cell volume must be positive");
  EmpiricalDistribution d;
  d.cell_volume = cell_volume;
  d.sorted_magnitudes.reserve(values.size());
  for (double v : values) d.sorted_magnitudes.push_back(std::abs(v));
  std::sort(d.sorted_magnitudes.begin(), d.sorted_magnitudes.end(), std::greater<>());
  return d;
}

EmpiricalDistribution make_distribution(const ScalarField& f) {
  return make_distribution(f.comp[0], f.grid.cell_volume());
}

double lorentz_norm_sorted(std::span<const double> a, double v, double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("lorentz_norm: p must be finite and > 0");
  if (!(q > 0.0)) throw std::invalid_argument("lorentz_norm: q must be > 0");
  const std::size_t N = a.size();
  if (N == 0 || a[0] == 0.0) return 0.0;

  if (std::isinf(q)) {
    double best = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      if (a[k] == 0.0) break;
      best = std::max(best, a[k] * std::pow(v * double(k + 1), 1.0 / p));
    }
    return best;
  }

  // On [a_{k+1}, a_k) the level set holds the k largest nodes.
  const double e = q / p;
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double next = (k + 1 < N) ? a[k + 1] : 0.0;
    if (a[k] == next) continue;
    sum += std::pow(v * double(k + 1), e) * (std::pow(a[k], q) - std::pow(next, q));
  }
  return std::pow(sum / q, 1.0 / q);
}

double lorentz_norm(const EmpiricalDistribution& d, double p, double q) {
  return lorentz_norm_sorted(d.sorted_magnitudes, d.cell_volume, p, q);
}

double lorentz_norm(const ScalarField& f, double p, double q) { return lorentz_norm(make_distribution(f), p, q); }

double ball_indicator_constant() { return std::cbrt(4.0 / 3.0 * std::numbers::pi); }

double interpolation_constant(double p0, double p1, double theta) {
  if (!(p0 >= 1.0) || !(p1 > p0) || !std::isfinite(p1))
    throw std::invalid_argument("interpolation_constant: need 1 <= p0 < p1 < inf");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("interpolation_constant: theta must lie in (0,1)");
  const double r = p1 / p0;
  const double e = r * (1.0 - theta) / theta;
  return 2.0 * (p0 / (p1 - p0)) * (1.0 / (1.0 - theta)) * std::pow(e, e);
}

double interpolated_exponent(double p0, double p1, double theta) {
  return 1.0 / ((1.0 - theta) / p0 + theta / p1);
}

InequalityReport make_report(double lhs, double rhs, double tolerance) {
  InequalityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  if (lhs == 0.0) {
    r.ratio = 0.0;
  } else if (rhs == 0.0) {
    r.ratio = kInf;
  } else {
    r.ratio = lhs / rhs;
  }
  r.passed = r.ratio <= 1.0 + tolerance;
  return r;
}

InequalityReport check_lorentz_interpolation(const ScalarField& f, double p0, double p1, double theta) {
  const double C = interpolation_constant(p0, p1, theta);
  const double pt = interpolated_exponent(p0, p1, theta);
  const auto d = make_distribution(f);
  const double lhs = lorentz_norm(d, pt, 1.0);
  const double rhs = C * std::pow(lorentz_norm(d, p0, kInf), 1.0 - theta) * std::pow(lorentz_norm(d, p1, kInf), theta);
  return make_report(lhs, rhs);
}

InequalityReport check_refined_inequality(const SpectralScalarField& f) {
  const double lhs = lorentz_norm(to_real(f), 3.0, 1.0);
  const double rhs = std::sqrt(sobolev_norm(f, 0.0) * sobolev_norm(f, 1.0));
  InequalityReport r = make_report(lhs, rhs, kInf);
  r.passed = std::isfinite(r.ratio);
  return r;
}

WeakSplit split_weak_lp(const ScalarField& f, double p, double delta, double q) {
  if (!(q < p)) throw std::invalid_argument("split_weak_lp: need q < p");
  if (!(delta > 0.0)) throw std::invalid_argument("split_weak_lp: delta must be > 0");
  WeakSplit s;
  s.small = ScalarField(f.grid);
  s.large = ScalarField(f.grid);
  s.weak_norm = lorentz_norm(f, p, kInf);
  s.threshold = delta * s.weak_norm;
  double lq = 0.0;
  for (std::size_t i = 0; i < f.comp[0].size(); ++i) {
    const double v = f.comp[0][i];
    if (std::abs(v) <= s.threshold) {
      s.small.comp[0][i] = v;
      s.small_sup = std::max(s.small_sup, std::abs(v));
    } else {
      s.large.comp[0][i] = v;
      lq += std::pow(std::abs(v), q);
    }
  }
  s.large_lq = std::pow(lq * f.grid.cell_volume(), 1.0 / q);
  s.scaled_large = s.weak_norm > 0.0 ? s.large_lq * std::pow(delta, p / q - 1.0) / s.weak_norm : 0.0;
  s.small_bound_holds = s.small_sup <= s.threshold;
  return s;
}

AgmonReport check_agmon(const SpectralVectorField& f, double s0, double s1) {
  if (!(s0 >= 0.0 && s0 < 1.5)) throw std::invalid_argument("check_agmon: need 0 <= s0 < 3/2");
  if (!(s1 > 1.5 && s1 <= 4.0)) throw std::invalid_argument("check_agmon: need 3/2 < s1 <= 4");
  AgmonReport r;
  r.theta = (1.5 - s0) / (s1 - s0);
  const double n0 = sobolev_norm(f, s0);
  const double n1 = sobolev_norm(f, s1);
  const double fl1 = fourier_lebesgue_norm(f);
  r.chain = make_report(fl1, std::pow(n0, 1.0 - r.theta) * std::pow(n1, r.theta), kInf);
  r.chain.passed = std::isfinite(r.chain.ratio);
  r.sup_norm = sup_norm(to_real(f));
  r.sup_dominated = r.sup_norm <= fl1 * (1.0 + 1e-12) + 1e-300;

  if (n0 == 0.0) return r;
  r.cutoff = std::pow(n1 / n0, 1.0 / (s1 - s0));

  const double M2 = r.cutoff * r.cutoff;
  double zero = 0.0, w_low = 0.0, w_high = 0.0, e_low = 0.0, e_high = 0.0;
  for_each_mode(f.grid, [&](const ModeInfo& m) {
    double a2 = 0.0;
    for (const auto& c : f.comp) a2 += std::norm(c[m.index]);
    const double a = std::sqrt(a2);
    const double k2 = m.k2();
    if (k2 == 0.0) {
      zero += a;
      return;
    }
    if (k2 <= M2) {
      r.low += m.weight * a;
      w_low += m.weight * std::pow(k2, -s0);
      e_low += m.weight * std::pow(k2, s0) * a2;
    } else {
      r.high += m.weight * a;
      w_high += m.weight * std::pow(k2, -s1);
      e_high += m.weight * std::pow(k2, s1) * a2;
    }
  });
  r.low += zero;
  r.low_bound = zero + std::sqrt(w_low * e_low);
  r.high_bound = std::sqrt(w_high * e_high);
  const double slack = 1.0 + 1e-12;
  r.split_holds = r.low <= r.low_bound * slack + 1e-300 && r.high <= r.high_bound * slack + 1e-300;
  return r;
}

}  // namespace lagflow
