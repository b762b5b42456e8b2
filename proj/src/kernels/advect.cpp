#include "lagflow/kernels/advect.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lagflow::kernels {

namespace {

struct Plan {
  long steps = 0;
  double h = 0.0;
  std::vector<long> save_steps;
};

Plan make_plan(const FlowOptions& opt, const ForcingPath& gamma) {
  if (!(opt.T > 0.0) || !(opt.dt > 0.0)) throw std::invalid_argument("flow: T and dt must be > 0");
  if (opt.save_stride < 1) throw std::invalid_argument("flow: save_stride must be >= 1");
  if (gamma.T + 1e-12 < opt.T) throw std::invalid_argument("flow: forcing path shorter than the horizon");
  Plan p;
  p.steps = std::max(1L, std::lround(opt.T / opt.dt));
  if (p.steps % opt.save_stride != 0) throw std::invalid_argument("flow: save_stride must divide the step count");
  p.h = opt.T / double(p.steps);
  for (long s = 0; s <= p.steps; s += opt.save_stride) p.save_steps.push_back(s);
  return p;
}

ParticleEnsemble prepare(const Drift& b, const std::vector<Vec3>& x0, const FlowOptions& opt, const Plan& p) {
  ParticleEnsemble e;
  e.initial = x0;
  e.box_len = b.box_len();
  for (long s : p.save_steps) e.times.push_back(opt.T * double(s) / double(p.steps));
  e.positions.assign(p.save_steps.size(), std::vector<Vec3>(x0.size()));
  return e;
}

// Advances one particle through the whole horizon and writes its saves.
void track(const Drift& b, const ForcingPath& gamma, const FlowOptions& opt, const Plan& p, std::size_t i,
           ParticleEnsemble& e) {
  const double L = b.box_len();
  auto v = [&](double t, const Vec3& y) { return b.velocity(t, wrap(y + gamma.at(t), L)); };
  Vec3 y = e.initial[i];
  std::size_t next = 0;
  for (long s = 0;; ++s) {
    if (next < p.save_steps.size() && p.save_steps[next] == s) {
      const double t = e.times[next];
      e.positions[next][i] = wrap(y + gamma.at(t), L);
      ++next;
    }
    if (s == p.steps) break;
    y = advance(v, double(s) * p.h, y, p.h, opt.scheme);
    if (!is_finite(y)) throw std::runtime_error("flow: non-finite position for particle " + std::to_string(i));
  }
}

}  // namespace

ParticleEnsemble advect_serial(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                               const FlowOptions& opt) {
  const Plan p = make_plan(opt, gamma);
  ParticleEnsemble e = prepare(b, x0, opt, p);
  for (std::size_t i = 0; i < x0.size(); ++i) track(b, gamma, opt, p, i, e);
  return e;
}

ParticleEnsemble advect_omp(const Drift& b, const ForcingPath& gamma, const std::vector<Vec3>& x0,
                            const FlowOptions& opt) {
  const Plan p = make_plan(opt, gamma);
  ParticleEnsemble e = prepare(b, x0, opt, p);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x0.size());
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      track(b, gamma, opt, p, static_cast<std::size_t>(i), e);
    } catch (const std::exception& ex) {
#pragma omp critical(lagflow_advect_error)
      {
        if (!failed) message = ex.what();
        failed = true;
      }
    }
  }
  if (failed) throw std::runtime_error(message);
  return e;
}

}  // namespace lagflow::kernels
