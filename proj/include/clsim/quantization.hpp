#pragma once

#include "clsim/polar.hpp"

namespace clsim {

/// Closed loop of grid indices (each consecutive pair adjacent on the grid,
/// wrap included; the last index connects back to the first). On a 1D
/// periodic grid the whole axis is the canonical loop.
struct LoopPath {
    Grid grid;
    std::vector<std::size_t> indices;

    /// The full 1D axis as a loop.
    static LoopPath axis_loop(const Grid& g);
    /// Axis-aligned rectangle loop in 2D (corners at the given index bounds).
    static LoopPath rectangle(const Grid& g, std::size_t i0, std::size_t i1, std::size_t j0,
                              std::size_t j1);

    void validate() const;
};

struct WindingResult {
    long n = 0;          // round(total / 2 pi hbar)
    double residual = 0.0;  // |total/(2 pi hbar) - n|
    double total = 0.0;  // summed wrapped increments of S
};

/// Winding number of S around the loop. Per-segment increments are reduced
/// mod 2 pi hbar; segments whose reduced increment exceeds pi hbar / 4 are
/// treated as branch cuts and bridged by the nearest trusted neighbours, so
/// a fractional cut (e.g. a 5 pi hbar jump) is not aliased away. The loop
/// must be dense enough that the true |p . dl| per segment stays below the
/// trust bound; a loop of nothing but cuts is an error. S may be a wrapped
/// phase or an unwrapped action.
WindingResult winding_number(const ScalarField& S, const LoopPath& loop);

/// Angular-momentum check on a circular orbit: S = L phi has winding n iff
/// L = n hbar. Returns the winding result for the loop restricted to the
/// sampled S.
struct BohrCheck {
    WindingResult winding;
    bool quantized = false;  // residual below tol
};
BohrCheck bohr_check(const ScalarField& S, const LoopPath& loop, double tol = 1e-10);

/// Circular-orbit spectrum of the attractive Coulomb potential V = -k/r:
/// for integer winding n, r_n = n^2 hbar^2 / (m k), E_n = -m k^2 / (2 hbar^2 n^2).
/// Each row also verifies the stationary Hamilton-Jacobi balance on the
/// circle: (grad S)^2/2m + V = E with |grad S| = n hbar / r_n.
struct CoulombLevel {
    int n = 0;
    double r = 0.0;
    double E = 0.0;
    double hj_residual = 0.0;  // |(n hbar / r)^2/2m - k/r - E|
};
std::vector<CoulombLevel> coulomb_circular_spectrum(double k, double m, double hbar, int n_max);

}  // namespace clsim
