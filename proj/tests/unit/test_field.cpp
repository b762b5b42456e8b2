#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "lagflow/field/modes.hpp"
#include "lagflow/field/snapshot_io.hpp"

using namespace lagflow;
using testutil::max_abs_diff;
using testutil::rel;

namespace {

constexpr double kPi = std::numbers::pi;

RealVectorField single_mode(const Grid3& g, double a, int kappa) {
  RealVectorField f(g);
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i)
        f.comp[1][g.node(i, j, k)] = a * std::sin(2.0 * kappa * kPi * i * g.spacing() / g.box_len);
  return f;
}

}  // namespace

TEST_CASE("grid rejects invalid sizes") {
  CHECK_THROWS_AS(Grid3(12, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Grid3(16, 0.0), std::invalid_argument);
  CHECK_NOTHROW(Grid3(16, 2.0));
}

TEST_CASE("constant field has only the zero mode") {
  Grid3 g(16, 1.0);
  RealVectorField f(g);
  for (double& v : f.comp[0]) v = 1.0;
  auto s = to_spectral(f);
  CHECK(std::abs(s.comp[0][0] - Complex(1.0, 0.0)) < 1e-14);
  double rest = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < s.comp[c].size(); ++i)
      if (!(c == 0 && i == 0)) rest = std::max(rest, std::abs(s.comp[c][i]));
  CHECK(rest < 1e-14);
}

TEST_CASE("single sine mode gives two conjugate coefficients") {
  Grid3 g(16, 1.0);
  auto s = to_spectral(single_mode(g, 1.0, 1));
  // sin(kx) = (e^{ikx} - e^{-ikx}) / 2i; the half layout stores the +k coefficient
  CHECK(std::abs(s.comp[1][g.mode(1, 0, 0)] - Complex(0.0, -0.5)) < 1e-14);
  int nonzero = 0;
  for (const auto& v : s.comp[1]) nonzero += std::abs(v) > 1e-12;
  CHECK(nonzero == 1);
  CHECK(fourier_lebesgue_norm(s) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("round trip and Parseval on random data") {
  Grid3 g(16, 2.0);
  auto f = testutil::random_real(g, 7);
  auto s = to_spectral(f);
  CHECK(max_abs_diff(to_real(s), f) < 1e-10);
  CHECK(rel(l2_norm(f), sobolev_norm(s, 0.0)) < 1e-10);
}

TEST_CASE("non-finite input is rejected") {
  Grid3 g(8, 1.0);
  RealVectorField f(g);
  f.comp[2][5] = std::nan("");
  CHECK_THROWS_AS(to_spectral(f), std::invalid_argument);
}

TEST_CASE("Leray projection") {
  Grid3 g(16, 1.0);
  auto u = random_band_vector(g, {1.0, 4.0, 0.0}, 3, true);

  SUBCASE("fixes divergence-free fields") { CHECK(max_abs_diff(leray_project(u), u) < 1e-12); }

  SUBCASE("kills gradients") {
    SpectralScalarField phi(g);
    phi.comp[0][g.mode(1, 0, 0)] = 0.5;  // cos(2 pi x / L)
    RealVectorField grad = gradient(phi);
    auto p = leray_project(to_spectral(grad));
    CHECK(testutil::max_abs(p) < 1e-14);
  }

  SUBCASE("recovers the solenoidal part of a Helmholtz sum") {
    auto phi = random_band_scalar(g, {1.0, 4.0, 0.0}, 11);
    auto sum = axpby(1.0, u, 1.0, to_spectral(gradient(phi)));
    CHECK(divergence_residual(sum) > 1e-3);
    auto p = leray_project(sum);
    CHECK(max_abs_diff(p, u) < 1e-12);
    CHECK(divergence_residual(p) < 1e-12);
  }

  SUBCASE("idempotent and self-adjoint") {
    auto a = to_spectral(testutil::random_real(g, 21));
    auto b = to_spectral(testutil::random_real(g, 22));
    auto pa = leray_project(a);
    CHECK(max_abs_diff(leray_project(pa), pa) < 1e-12);
    const double l = inner_product(to_real(pa), to_real(b));
    const double r = inner_product(to_real(a), to_real(leray_project(b)));
    CHECK(rel(l, r) < 1e-10);
  }
}

TEST_CASE("mollifier") {
  Grid3 g(16, 1.0);
  CHECK_THROWS_AS(mollify(SpectralVectorField(g), 0), std::invalid_argument);

  SUBCASE("constant is unchanged") {
    SpectralVectorField c(g);
    c.comp[0][0] = 2.0;
    CHECK(max_abs_diff(mollify(c, 3), c) == 0.0);
  }
  SUBCASE("single mode is damped by the multiplier") {
    auto s = to_spectral(single_mode(g, 1.0, 2));
    const double k = 2.0 * kPi * 2.0;
    const double expected = std::exp(-k * k / (2.0 * 5.0 * 5.0));
    auto m = mollify(s, 5);
    const auto idx = g.mode(2, 0, 0);
    CHECK(std::abs(m.comp[1][idx] / s.comp[1][idx] - expected) < 1e-14);
  }
  SUBCASE("error shrinks with the index and commutes with Leray") {
    Grid3 g2(32, 2.0 * kPi);
    auto u = random_band_vector(g2, {1.0, 8.0, 0.0}, 5, false);
    const double base = sobolev_norm(u, 0.0);
    const double e64 = sobolev_norm(axpby(1.0, mollify(u, 64), -1.0, u), 0.0) / base;
    const double e8 = sobolev_norm(axpby(1.0, mollify(u, 8), -1.0, u), 0.0) / base;
    CHECK(e64 < e8);
    CHECK(sobolev_norm(mollify(u, 8), 0.0) <= base);
    CHECK(max_abs_diff(mollify(leray_project(u), 6), leray_project(mollify(u, 6))) < 1e-12);
  }
}

TEST_CASE("Sobolev and Fourier-Lebesgue norms") {
  Grid3 g(16, 1.0);
  CHECK(sobolev_norm(SpectralVectorField(g), 1.5) == 0.0);
  CHECK(fourier_lebesgue_norm(SpectralVectorField(g)) == 0.0);
  CHECK_THROWS_AS(sobolev_norm(SpectralVectorField(g), 4.5), std::invalid_argument);

  const double a = 0.7, kappa = 2.0 * kPi * 3.0;
  auto s = to_spectral(single_mode(g, a, 3));
  for (double sp : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const double expected = a * std::pow(kappa, sp) * std::sqrt(g.volume() / 2.0);
    CHECK(rel(sobolev_norm(s, sp), expected) < 1e-12);
  }
  CHECK(rel(fourier_lebesgue_norm(s), a) < 1e-12);

  SUBCASE("H1 equals the L2 norm of the gradient") {
    Grid3 g2(32, 3.0);
    auto u = random_band_vector(g2, {1.0, 8.0, 0.5}, 9, false);
    const double h1 = sobolev_norm(u, 1.0);
    CHECK(rel(h1 * h1, std::pow(l2_norm(gradient(u)), 2)) < 1e-8);
  }

  SUBCASE("FL1 dominates the sup norm") {
    Grid3 g2(16, 1.0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto u = random_band_vector(g2, {1.0, 5.0, 0.0}, seed, seed % 2 == 0);
      CHECK(sup_norm(to_real(u)) <= fourier_lebesgue_norm(u) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("spectral gradient") {
  Grid3 g(16, 1.0);
  SpectralVectorField c(g);
  c.comp[2][0] = 3.0;
  CHECK(max_abs_diff(gradient(c), TensorField(g)) < 1e-14);

  auto du = gradient(to_spectral(single_mode(g, 1.0, 1)));
  double worst = 0.0, others = 0.0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) {
        const auto idx = g.node(i, j, k);
        worst = std::max(worst, std::abs(du.comp[3][idx] - 2.0 * kPi * std::cos(2.0 * kPi * i * g.spacing())));
        for (int c = 0; c < 9; ++c)
          if (c != 3) others = std::max(others, std::abs(du.comp[c][idx]));
      }
  CHECK(worst < 1e-12);
  CHECK(others < 1e-12);

  auto u = random_band_vector(Grid3(32, 1.0), {1.0, 8.0, 0.0}, 4, true);
  auto gu = gradient(u);
  double trace = 0.0;
  for (std::size_t i = 0; i < gu.comp[0].size(); ++i)
    trace = std::max(trace, std::abs(gu.comp[0][i] + gu.comp[4][i] + gu.comp[8][i]));
  CHECK(trace < 1e-10);
}

TEST_CASE("point sampling") {
  Grid3 g(16, 1.0);
  SpectralVectorField c(g);
  c.comp[0][0] = 1.5;
  for (Vec3 x : {Vec3{0.1, 0.2, 0.3}, Vec3{0.99, 0.0, 0.51}}) {
    CHECK(std::abs(sample_spectral(c, x).x - 1.5) < 1e-14);
    CHECK(std::abs(sample_velocity(c, x, SampleMode::trilinear).x - 1.5) < 1e-14);
  }

  auto s = to_spectral(single_mode(g, 2.0, 1));
  Vec3 x{0.125, 0.4, 0.7};
  CHECK(std::abs(sample_spectral(s, x).y - 2.0 * std::sin(2.0 * kPi * 0.125)) < 1e-13);
  CHECK(std::abs(sample_spectral(s, Vec3{}).y) < 1e-14);

  SUBCASE("both samplers reproduce node values") {
    auto u = random_band_vector(g, {1.0, 5.0, 0.0}, 8, true);
    auto r = to_real(u);
    double gs = 0.0, gt = 0.0;
    for (int k = 0; k < g.n; k += 5)
      for (int j = 0; j < g.n; j += 3)
        for (int i = 0; i < g.n; i += 2) {
          const auto idx = g.node(i, j, k);
          const Vec3 p{i * g.spacing(), j * g.spacing(), k * g.spacing()};
          const Vec3 ref{r.comp[0][idx], r.comp[1][idx], r.comp[2][idx]};
          gs = std::max(gs, norm(sample_spectral(u, p) - ref));
          gt = std::max(gt, norm(sample_trilinear(r, p) - ref));
        }
    CHECK(gs < 1e-12);
    CHECK(gt < 1e-14);
  }

  SUBCASE("trilinear error is second order") {
    // The same band-limited function on two grids; the spectral value is exact on both.
    double err[2];
    int idx = 0;
    for (int n : {32, 64}) {
      Grid3 gg(n, 1.0);
      auto u = random_band_vector(gg, {1.0, 3.0, 0.0}, 17, true);
      auto r = to_real(u);
      std::mt19937_64 rng(99);
      std::uniform_real_distribution<double> U(0.0, 1.0);
      double m = 0.0;
      for (int t = 0; t < 300; ++t) {
        Vec3 p{U(rng), U(rng), U(rng)};
        m = std::max(m, norm(sample_trilinear(r, p) - sample_spectral(u, p)));
      }
      err[idx++] = m;
    }
    const double ratio = err[0] / err[1];
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("upsampling is exact band-limited interpolation") {
  Grid3 g(16, 1.0);
  auto f = to_spectral(testutil::random_real(g, 31));  // includes Nyquist content
  auto fine = upsample(f, 2);
  auto rf = to_real(f);
  auto rfine = to_real(fine);
  double m = 0.0;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i)
        for (int c = 0; c < 3; ++c)
          m = std::max(m, std::abs(rf.comp[c][g.node(i, j, k)] - rfine.comp[c][fine.grid.node(2 * i, 2 * j, 2 * k)]));
  CHECK(m < 1e-12);

  // spectral evaluation of the coarse field agrees with the fine one everywhere
  Vec3 x{0.123, 0.456, 0.789};
  CHECK(norm(sample_spectral(f, x) - sample_spectral(fine, x)) < 1e-12);
}

TEST_CASE("dealiasing keeps modes up to n/3") {
  Grid3 g(32, 1.0);
  auto f = to_spectral(testutil::random_real(g, 2));
  auto d = dealias(f);
  for_each_mode(g, [&](const ModeInfo& m) {
    const bool keep = std::abs(m.jx) <= 10 && std::abs(m.jy) <= 10 && std::abs(m.jz) <= 10;
    if (keep)
      CHECK(d.comp[0][m.index] == f.comp[0][m.index]);
    else
      CHECK(d.comp[0][m.index] == Complex{});
  });
}

TEST_CASE("random band fields do not depend on the grid") {
  auto a = random_band_vector(Grid3(16, 1.0), {1.0, 4.0, 1.0}, 42, true);
  auto b = random_band_vector(Grid3(32, 1.0), {1.0, 4.0, 1.0}, 42, true);
  Vec3 x{0.3, 0.6, 0.9};
  CHECK(norm(sample_spectral(a, x) - sample_spectral(b, x)) < 1e-12);
  CHECK(rel(sobolev_norm(a, 1.0), sobolev_norm(b, 1.0)) < 1e-12);
  CHECK(divergence_residual(a) < 1e-12);
  CHECK_THROWS_AS(random_band_vector(Grid3(8, 1.0), {1.0, 4.0, 0.0}, 1, true), std::invalid_argument);
}

TEST_CASE("LGF1 and LGS1 round trips are lossless") {
  Grid3 g(8, 2.5);
  auto f = testutil::random_real(g, 5);
  std::stringstream ss;
  io::write_vector_snapshot(ss, f, 0.75, 0.01);
  CHECK(ss.str().size() == 4 + 4 + 4 + 3 * 8 + 3 * 512 * 8);
  CHECK(ss.str().substr(0, 4) == "LGF1");
  io::SnapshotHeader h;
  auto back = io::read_vector_snapshot(ss, &h);
  CHECK(max_abs_diff(back, f) == 0.0);
  CHECK(h.n == 8);
  CHECK(h.box_len == 2.5);
  CHECK(h.time == 0.75);
  CHECK(h.nu == 0.01);

  ScalarField s(g);
  s.comp[0] = f.comp[1];
  std::stringstream ss2;
  io::write_scalar_snapshot(ss2, s, 1.0, 0.0);
  auto sb = io::read_scalar_snapshot(ss2);
  CHECK(sb.comp[0] == s.comp[0]);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(io::read_vector_snapshot(bad), std::runtime_error);
}
