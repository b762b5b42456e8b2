#pragma once

#include <complex>

#include "lagflow/field/field.hpp"

namespace lagflow {

namespace fft {
/// Forward real-to-complex transform of one component, scaled by 1/n^3.
void forward(const Grid3& g, const double* in, Complex* out);
/// Inverse complex-to-real transform of one component (no scaling).
void inverse(const Grid3& g, const Complex* in, double* out);
}  // namespace fft

/// Throws std::invalid_argument on non-finite samples.
template <std::size_t C>
SpectralField<C> to_spectral(const RealField<C>& f);

template <std::size_t C>
RealField<C> to_real(const SpectralField<C>& f);

extern template SpectralField<1> to_spectral(const RealField<1>&);
extern template SpectralField<3> to_spectral(const RealField<3>&);
extern template SpectralField<9> to_spectral(const RealField<9>&);
extern template RealField<1> to_real(const SpectralField<1>&);
extern template RealField<3> to_real(const SpectralField<3>&);
extern template RealField<9> to_real(const SpectralField<9>&);

}  // namespace lagflow
