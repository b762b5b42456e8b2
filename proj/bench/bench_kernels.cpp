#include <benchmark/benchmark.h>

#include <numbers>

#include "lagflow/field/fft.hpp"
#include "lagflow/field/random_fields.hpp"
#include "lagflow/flow/flow.hpp"
#include "lagflow/kernels/advect.hpp"
#include "lagflow/kernels/ball_sums.hpp"
#include "lagflow/picard/picard.hpp"

using namespace lagflow;

namespace {

ScalarField positive_field(int n) {
  const Grid3 g(n, 1.0);
  return magnitude(to_real(random_band_vector(g, {1.0, double(n) / 4.0, 0.0}, 3, true)));
}

const FieldDrift& taylor_green() {
  static const FieldDrift b = [] {
    Grid3 g(32, 2.0 * std::numbers::pi);
    return FieldDrift({{0.0, make_initial_data(InitialKind::taylor_green, g, {}, 0)}});
  }();
  return b;
}

FlowOptions flow_options() {
  FlowOptions opt;
  opt.T = 0.5;
  opt.dt = 0.01;
  opt.save_stride = 10;
  return opt;
}

void BM_AdvectSerial(benchmark::State& s) {
  const auto x0 = lattice_points(int(s.range(0)), taylor_green().box_len());
  const auto gamma = zero_path(0.5, 0.01);
  for (auto _ : s) benchmark::DoNotOptimize(kernels::advect_serial(taylor_green(), gamma, x0, flow_options()));
  s.SetItemsProcessed(s.iterations() * std::int64_t(x0.size()));
}

void BM_AdvectOmp(benchmark::State& s) {
  const auto x0 = lattice_points(int(s.range(0)), taylor_green().box_len());
  const auto gamma = zero_path(0.5, 0.01);
  for (auto _ : s) benchmark::DoNotOptimize(kernels::advect_omp(taylor_green(), gamma, x0, flow_options()));
  s.SetItemsProcessed(s.iterations() * std::int64_t(x0.size()));
}

void BM_MaximalSerial(benchmark::State& s) {
  const auto f = positive_field(int(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::maximal_serial(f));
}

void BM_MaximalOmp(benchmark::State& s) {
  const auto f = positive_field(int(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::maximal_omp(f));
}

void BM_SteinSerial(benchmark::State& s) {
  const auto f = positive_field(int(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::stein_serial(f));
}

void BM_SteinOmp(benchmark::State& s) {
  const auto f = positive_field(int(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(kernels::stein_omp(f));
}

void BM_PicardLattice(benchmark::State& s) {
  const auto pts = lattice_points(int(s.range(0)), taylor_green().box_len());
  PicardOptions opt;
  opt.T = 0.5;
  opt.dt = 0.02;
  opt.n_iters = 8;
  const auto gamma = zero_path(0.5, 0.02);
  for (auto _ : s) benchmark::DoNotOptimize(picard_lattice(taylor_green(), gamma, pts, opt));
  s.SetItemsProcessed(s.iterations() * std::int64_t(pts.size()));
}

}  // namespace

BENCHMARK(BM_AdvectSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdvectOmp)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalOmp)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteinSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteinOmp)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PicardLattice)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
