#pragma once

#include <vector>

#include "lagflow/field/field.hpp"

namespace lagflow::kernels {

/// Integer node offsets of the discrete ball |o| <= R (R in grid spacings).
struct BallStencil {
  int radius = 0;
  int stride = 1;
  std::vector<std::array<int, 3>> offsets;
  /// Row decomposition: for each (dy, dz) the half-width w of the x segment [-w, w].
  std::vector<std::array<int, 3>> rows;
};

/// Full ball with all integer offsets.
BallStencil make_ball(int radius);

/// Ball restricted to offsets that are multiples of `stride` (a sub-lattice).
BallStencil make_strided_ball(int radius, int stride);

/// Dyadic radii 2^j, j = 0 .. log2(n/4), in grid spacings.
std::vector<int> dyadic_radii(int n);

/// max(f(x), max_j average of f over B(x, r_j)); brute-force stencil sums.
ScalarField maximal_serial(const ScalarField& f);

/// Same operator with periodic x-row prefix sums, parallel over rows.
ScalarField maximal_omp(const ScalarField& f);

/// Stride used for the Stein ball of a given radius so that it keeps at most
/// about 257 samples (the full radius-4 ball).
int stein_stride(int radius);

/// sup_j ||m 1_B||_{L^{3,1}} / ||1_B||_{L^{3,1}} over the dyadic balls, both norms
/// taken on the same (possibly strided) node set.
ScalarField stein_serial(const ScalarField& magnitude);
ScalarField stein_omp(const ScalarField& magnitude);

}  // namespace lagflow::kernels
