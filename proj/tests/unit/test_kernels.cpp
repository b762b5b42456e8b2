#include <omp.h>

#include "doctest.h"
#include "helpers.hpp"
#include "lagflow/kernels/advect.hpp"
#include "lagflow/kernels/ball_sums.hpp"
#include "lagflow/solver/solver.hpp"

using namespace lagflow;

namespace {

ScalarField positive_field(const Grid3& g, std::uint64_t seed) {
  return magnitude(to_real(random_band_vector(g, {1.0, 2.0, 0.0}, seed, true)));
}

}  // namespace

TEST_CASE("advection kernels agree bit for bit") {
  const double L = 2.0 * std::numbers::pi;
  Grid3 g(16, L);
  FieldDrift b({{0.0, make_initial_data(InitialKind::taylor_green, g, {}, 0)}});
  FlowOptions opt;
  opt.T = 0.3;
  opt.dt = 0.01;
  opt.save_stride = 3;
  auto gamma = sample_brownian(opt.T, opt.dt, 0.2, 17);
  auto x0 = lattice_points(10, L);
  for (auto scheme : {TimeScheme::rk4, TimeScheme::euler}) {
    opt.scheme = scheme;
    auto a = kernels::advect_serial(b, gamma, x0, opt);
    for (int threads : {1, 3}) {
      omp_set_num_threads(threads);
      auto c = kernels::advect_omp(b, gamma, x0, opt);
      REQUIRE(a.times == c.times);
      for (std::size_t s = 0; s < a.positions.size(); ++s)
        for (std::size_t i = 0; i < a.size(); ++i) {
          CHECK(a.positions[s][i].x == c.positions[s][i].x);
          CHECK(a.positions[s][i].y == c.positions[s][i].y);
          CHECK(a.positions[s][i].z == c.positions[s][i].z);
        }
    }
  }
}

TEST_CASE("maximal kernels agree") {
  for (int n : {8, 16, 32}) {
    Grid3 g(n, 1.0);
    auto f = positive_field(g, n);
    auto a = kernels::maximal_serial(f);
    auto b = kernels::maximal_omp(f);
    CHECK(testutil::max_abs_diff(a, b) <= 1e-12 * sup_norm(a));
  }
}

TEST_CASE("Stein kernels agree") {
  for (int n : {8, 16, 32}) {
    Grid3 g(n, 1.0);
    auto f = positive_field(g, 100 + n);
    auto a = kernels::stein_serial(f);
    auto b = kernels::stein_omp(f);
    CHECK(a.comp[0] == b.comp[0]);
  }
}

TEST_CASE("ball stencils") {
  auto b = kernels::make_ball(2);
  CHECK(b.offsets.size() == 33);  // lattice points with |p|^2 <= 4
  std::size_t total = 0;
  for (const auto& r : b.rows) total += std::size_t(2 * r[2] + 1);
  CHECK(total == b.offsets.size());
  CHECK(kernels::dyadic_radii(64) == std::vector<int>{1, 2, 4, 8, 16});
  for (int r : {1, 2, 4, 8, 16, 32}) CHECK(double(r) / kernels::stein_stride(r) <= 4.0);
  CHECK(kernels::make_strided_ball(16, kernels::stein_stride(16)).offsets.size() <= 257);
}
