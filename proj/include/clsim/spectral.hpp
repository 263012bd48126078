#pragma once

#include "clsim/field.hpp"

namespace clsim {

/// FFT-based derivatives on the periodic grid. Backed by per-grid FFTW plans
/// cached thread-locally; safe to call from worker threads.
///
/// Odd derivatives zero the Nyquist mode (its ik has no well-defined sign).
ScalarField gradient(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
ComplexField gradient(const ComplexField& f, int axis);
ComplexField laplacian(const ComplexField& f);

/// Forward/backward c2c transforms (backward includes the 1/N factor).
/// Layout matches Grid: row-major, FFTW's default mode order.
void fft_forward(const Grid& g, std::vector<cplx>& data);
void fft_backward(const Grid& g, std::vector<cplx>& data);

/// Periodic antiderivative along an axis: returns F with dF/dx = f - mean(f),
/// zero-mean. The k=0 component of f has no periodic antiderivative; callers
/// keep track of it separately (see ActionField::slope).
ScalarField antiderivative(const ScalarField& f, int axis);

}  // namespace clsim
