#pragma once

// Shared state builders for the unit tests. Gaussians are normalized on the
// grid (not analytically) so norm checks start from 1 to round-off.

#include <cmath>

#include "clsim/polar.hpp"
#include "clsim/potential.hpp"

namespace support {

inline clsim::ScalarField gaussian_R(const clsim::Grid& g, std::array<double, 2> center,
                                     double sigma) {
    clsim::ScalarField R(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto p = g.point(i);
        double d2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double d = p[a] - center[a];
            d2 += d * d;
        }
        R[i] = std::exp(-d2 / (4.0 * sigma * sigma));
    }
    double nrm = 0.0;
    for (double r : R.v) nrm += r * r;
    nrm = std::sqrt(nrm * g.cell_volume());
    for (double& r : R.v) r /= nrm;
    return R;
}

/// Packet with momentum p along axis 0, slope snapped to the reciprocal
/// lattice so the composed wavefunction is exactly periodic.
inline clsim::PolarPair gaussian_state(const clsim::Grid& g, double center, double sigma,
                                       double p = 0.0) {
    clsim::PolarPair st;
    st.R = gaussian_R(g, {center, 0.0}, sigma);
    st.S = clsim::ActionField(g, {g.nearest_mode(0, p / g.hbar) * g.hbar, 0.0});
    return st;
}

inline clsim::ComplexField gaussian_psi(const clsim::Grid& g, double center, double sigma,
                                        double p = 0.0) {
    return clsim::compose(gaussian_state(g, center, sigma, p));
}

/// Uniformly focusing action, S = -a x^2 where the mass lives. The raw
/// quadratic is not periodic, so the action is built by integrating a blended
/// velocity profile v(x) = -(2a/m) x w(|x|) that is windowed to zero before
/// the seam. The window only ever raises dv/dx (for x > 0, w' <= 0 adds a
/// positive term), so min dv/dx stays -2a/m and the first caustic is the
/// core's at t* = m / 2a, not an artifact of the blend band.
inline clsim::PolarPair focusing_state(const clsim::Grid& g, double a, double sigma,
                                       double core_radius, double band) {
    using clsim::ScalarField;
    ScalarField v(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        const double s = (std::abs(x) - core_radius) / band;
        v[i] = -(2.0 * a / g.mass) * x * (1.0 - clsim::smoothstep_order(s, 9));
    }
    clsim::PolarPair st;
    st.S = clsim::ActionField(clsim::antiderivative(v, 0));
    for (double& sv : st.S.periodic.v) sv *= g.mass;
    st.R = gaussian_R(g, {0.0, 0.0}, sigma);
    return st;
}

}  // namespace support
