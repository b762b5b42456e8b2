#pragma once

#include <cstddef>

#include "lagflow/field/field.hpp"
#include "lagflow/field/vec3.hpp"

namespace lagflow {

// Norm conventions on the box [0,L)^3, with c_k the 1/n^3-normalized
// coefficients and w the half-complex multiplicity:
//   ||f||_{L2}^2       = L^3 * sum w |c_k|^2  = h^3 * sum_nodes |f|^2
//   ||f||_{H^s dot}^2  = L^3 * sum w |k|^{2s} |c_k|^2
//   ||f||_{FL1}        = sum w |c_k|          (>= sup |f|, constant 1)
// A single mode a*sin(kappa x) e_2 has ||f||_{H^s dot} = a kappa^s sqrt(L^3/2)
// and ||f||_{FL1} = a.

/// Orthogonal projection onto divergence-free fields, I - k k^T/|k|^2.
SpectralVectorField leray_project(const SpectralVectorField& f);

/// Gaussian Fourier multiplier exp(-|k|^2 / (2 n_moll^2)); throws if n_moll < 1.
template <std::size_t C>
SpectralField<C> mollify(const SpectralField<C>& f, int n_moll);

/// Zeroes every mode with |j_d| > n/3 on some axis (2/3 rule).
template <std::size_t C>
SpectralField<C> dealias(const SpectralField<C>& f);

/// Homogeneous Sobolev norm; s must lie in [0, 4].
template <std::size_t C>
double sobolev_norm(const SpectralField<C>& f, double s);

template <std::size_t C>
double fourier_lebesgue_norm(const SpectralField<C>& f);

template <std::size_t C>
double l2_norm(const RealField<C>& f);

/// Pointwise Euclidean magnitude over components.
template <std::size_t C>
ScalarField magnitude(const RealField<C>& f);

/// Grid maximum of the pointwise magnitude.
template <std::size_t C>
double sup_norm(const RealField<C>& f);

/// Grid inner product h^3 * sum_nodes f.g.
template <std::size_t C>
double inner_product(const RealField<C>& f, const RealField<C>& g);

/// Spectral gradient; Nyquist derivatives are zeroed.
TensorField gradient(const SpectralVectorField& f);
RealVectorField gradient(const SpectralScalarField& f);

/// Spectral gradient kept in Fourier space (comp[3*i+j] = i k_j c_i).
SpectralField<9> spectral_gradient(const SpectralVectorField& f);

/// max_k |k.c_k| / |c_k| over nonzero modes.
double divergence_residual(const SpectralVectorField& f);

/// Exact band-limited interpolation onto a grid refined by `factor` (power of two).
template <std::size_t C>
SpectralField<C> upsample(const SpectralField<C>& f, int factor);

/// Linear combination a*f + b*g on the same grid.
template <std::size_t C>
SpectralField<C> axpby(double a, const SpectralField<C>& f, double b, const SpectralField<C>& g);

enum class SampleMode { spectral, trilinear };

/// Exact trigonometric evaluation at an arbitrary point.
Vec3 sample_spectral(const SpectralVectorField& f, const Vec3& x);
double sample_spectral(const SpectralScalarField& f, const Vec3& x);

/// Trilinear interpolation from node values (periodic).
Vec3 sample_trilinear(const RealVectorField& f, const Vec3& x);
double sample_trilinear(const ScalarField& f, const Vec3& x);

/// Convenience dispatcher; trilinear mode transforms to node values first.
Vec3 sample_velocity(const SpectralVectorField& f, const Vec3& x, SampleMode mode);

}  // namespace lagflow
