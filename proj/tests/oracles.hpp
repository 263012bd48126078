#pragma once

// Closed-form references the solvers are tested against. Everything here is
// derived independently of the library internals: free-packet dispersion,
// quadratic-action focusing, breathing widths in a harmonic well, and the
// velocity field of a uniformly focusing flow. Each formula states its own
// validity window; tests must stay inside it.

#include <array>
#include <cmath>
#include <complex>

#include "clsim/grid.hpp"

namespace oracles {

// Free Gaussian packet, hbar/m from the grid. The initial amplitude is
// (2 pi s0^2)^(-1/4) exp(-(x-c)^2 / 4 s0^2) e^(i p x / hbar); at time t,
//   psi(x,t) = (2 pi s0^2)^(-1/4) z^(-1/2)
//              exp(-d^2 / (4 s0^2 z)) exp(i (p x - p^2 t / 2m) / hbar),
//   z = 1 + i hbar t / (2 m s0^2),  d = x - c - p t / m.
// Valid while the tails are negligible at the domain seam.
inline std::complex<double> free_packet(const clsim::Grid& g, double c, double s0, double p,
                                        double x, double t) {
    const double h = g.hbar, m = g.mass;
    const std::complex<double> z(1.0, h * t / (2.0 * m * s0 * s0));
    const double d = x - c - p * t / m;
    return std::pow(2.0 * clsim::pi * s0 * s0, -0.25) / std::sqrt(z) *
           std::exp(-d * d / (4.0 * s0 * s0 * z)) *
           std::exp(std::complex<double>(0.0, (p * x - p * p * t / (2.0 * m)) / h));
}

// Std dev of |psi|^2 for the free packet above: s(t) = s0 sqrt(1 + tau^2),
// tau = hbar t / (2 m s0^2).
inline double free_width(double s0, double hbar, double m, double t) {
    const double tau = hbar * t / (2.0 * m * s0 * s0);
    return s0 * std::sqrt(1.0 + tau * tau);
}

// Quadratic action S(x,t) = -a x^2 / (1 - 2 a t / m) solves the free
// Hamilton-Jacobi equation dS/dt = -(dS/dx)^2 / 2m exactly. Characteristics
// scale uniformly, x(t) = x0 (1 - 2 a t / m), so any transported density
// keeps its shape with width factor (1 - 2 a t / m); all of them focus at
// t* = m / 2a.
struct FocusingFlow {
    double a, m;
    double action(double x, double t) const { return -a * x * x / (1.0 - 2.0 * a * t / m); }
    double width_factor(double t) const { return 1.0 - 2.0 * a * t / m; }
    double focus_time() const { return m / (2.0 * a); }
};

// Ground-width Gaussian in a harmonic well breathes as
//   s^2(t) = s0^2 cos^2(w t) + (hbar / (2 m w s0))^2 sin^2(w t)
// while the mean follows the classical orbit A cos(w t) (rest release).
inline double breathing_width(double s0, double hbar, double m, double w, double t) {
    const double sq = hbar / (2.0 * m * w * s0);
    const double c = std::cos(w * t), s = std::sin(w * t);
    return std::sqrt(s0 * s0 * c * c + sq * sq * s * s);
}

// Velocity field of the rest-released harmonic flow, v(x,t) = -w x tan(w t):
// its integral curves are x(t) = x0 cos(w t). Regular until t = T/4.
struct HarmonicRestFlow {
    double omega;
    double velocity(double x, double t) const { return -omega * x * std::tan(omega * t); }
    double position(double x0, double t) const { return x0 * std::cos(omega * t); }
};

// Rigid acceleration under V = -F x: the packet translates as
// x_c(t) = x_c(0) + F t^2 / 2m with unchanged shape (S stays linear in x).
inline double accelerated_center(double x0, double F, double m, double t) {
    return x0 + F * t * t / (2.0 * m);
}

// L2-normalized Gaussian overlap integral: for unit-norm amplitudes of common
// width s separated by q, <R1|R2> = exp(-q^2 / 8 s^2).
inline double gaussian_overlap(double q, double s) { return std::exp(-q * q / (8.0 * s * s)); }

}  // namespace oracles
