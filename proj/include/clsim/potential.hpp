#pragma once

#include <functional>
#include <memory>

#include "clsim/field.hpp"

namespace clsim {

/// External potential V(x, t). Analytic kinds carry their gradient; sampled
/// potentials fall back to spectral differentiation.
///
/// The harmonic and linear factories blend the potential to a constant beyond
/// flatten_radius with a C^3 smoothstep. On a periodic grid the raw forms have
/// wrap discontinuities that poison spectral derivatives of any field they
/// feed; the blend confines the modification to a band near the boundary that
/// scenario states never reach.
class Potential {
public:
    using ValueFn = std::function<double(std::array<double, 2>, double)>;
    using GradFn = std::function<std::array<double, 2>(std::array<double, 2>, double)>;

    Potential() = default;  // V = 0

    static Potential zero(const Grid& g);
    /// V = m omega^2 |x|^2 / 2 inside flatten_radius. flatten_radius <= 0
    /// picks the default 0.35 * min extent.
    static Potential harmonic(const Grid& g, double omega, double flatten_radius = 0.0);
    /// V = -F . x inside flatten_radius (constant force along each axis); the
    /// force reverses in the outer band so V closes periodically at the seam.
    static Potential linear(const Grid& g, std::array<double, 2> force, double flatten_radius = 0.0);
    /// Static sampled values; gradient via spectral differentiation.
    static Potential sampled(ScalarField values);
    /// Time-dependent analytic potential.
    static Potential analytic(const Grid& g, ValueFn value, GradFn grad, bool time_dependent);

    bool time_dependent() const { return time_dependent_; }
    const Grid& grid() const { return grid_; }

    double value(std::array<double, 2> x, double t) const { return value_ ? value_(x, t) : 0.0; }
    std::array<double, 2> grad(std::array<double, 2> x, double t) const;

    /// Values on the grid at time t. Static potentials are cached.
    const ScalarField& values_at(double t) const;
    /// Per-axis gradient on the grid at time t (analytic where available).
    const ScalarField& grad_at(double t, int axis) const;

private:
    Grid grid_;
    bool time_dependent_ = false;
    ValueFn value_;
    GradFn grad_;
    // lazily filled caches; refreshed when t changes for time-dependent kinds
    struct Cache;
    std::shared_ptr<Cache> cache_;
    void ensure_cache(double t) const;
};

/// C^3 smoothstep: 0 at s<=0, 1 at s>=1, first three derivatives vanish at
/// both ends (35s^4 - 84s^5 + 70s^6 - 20s^7).
double smoothstep3(double s);

/// C^q smoothstep of arbitrary order (regularized incomplete beta polynomial,
/// q = 3 reproduces smoothstep3). Blending fields that feed spectral
/// derivatives wants q well above 3 so the blend's Fourier tail dies fast.
double smoothstep_order(double s, int q);

}  // namespace clsim
