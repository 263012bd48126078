#pragma once

#include "clsim/field.hpp"

namespace clsim {

/// Periodic Lagrange interpolation of gridded fields at off-grid points.
/// order is the polynomial degree: 1 (2-point), 3 (4-point), 5, or 7.
/// 2D uses the tensor product stencil.
class Interpolator {
public:
    Interpolator(const ScalarField& f, int order);

    double operator()(std::array<double, 2> x) const;

    static void validate_order(int order);

private:
    const ScalarField& f_;
    int order_;
};

/// One-off convenience: interpolate f at x.
double interp_at(const ScalarField& f, std::array<double, 2> x, int order = 3);

}  // namespace clsim
