#pragma once

#include <optional>

#include "clsim/field.hpp"
#include "clsim/spectral.hpp"

namespace clsim {

/// Action field S carried as a constant slope per axis plus a periodic
/// remainder: S(x) = sum_a slope[a]*x_a + periodic(x).
///
/// A uniformly moving state has S = p0*x, which is not a periodic function
/// even though every observable built from it (the velocity field, the phase
/// factor for lattice momenta) is. Splitting off the slope keeps spectral
/// derivatives exact; the classical solver preserves the split because the
/// Hamilton-Jacobi right-hand side of a periodic-smooth potential is itself
/// periodic.
struct ActionField {
    std::array<double, 2> slope = {0.0, 0.0};
    ScalarField periodic;

    ActionField() = default;
    explicit ActionField(const Grid& g) : periodic(g) {}
    ActionField(const Grid& g, std::array<double, 2> slope_) : slope(slope_), periodic(g) {}
    explicit ActionField(ScalarField per) : periodic(std::move(per)) {}

    const Grid& grid() const { return periodic.grid; }

    /// Total S at a grid point, slope part evaluated in the centered chart.
    double total(std::size_t flat) const {
        auto p = periodic.grid.point(flat);
        double s = periodic[flat];
        for (int a = 0; a < periodic.grid.dim; ++a) s += slope[a] * p[a];
        return s;
    }
};

/// dS/dx_a as a plain periodic field (slope folded in).
ScalarField action_gradient(const ActionField& S, int axis);
/// Laplacian of S; the slope contributes nothing.
ScalarField action_laplacian(const ActionField& S);

/// Polar (Madelung) representation: psi = R * exp(i S / hbar), R >= 0.
struct PolarPair {
    ScalarField R;
    ActionField S;
};

/// Decomposition result; S is wrapped to (-pi*hbar, pi*hbar] and set to 0
/// (masked) where |psi|^2 < rho_floor. The wrapped S is for inspection and
/// winding sums; dynamics should use velocity_field, which never unwraps.
struct Decomposition {
    PolarPair pair;
    Mask phase_defined;
};

/// psi = R * exp(i S / hbar). No smoothness requirement; if S carries a slope
/// that is not on the reciprocal lattice the result wraps discontinuously.
ComplexField compose(const PolarPair& p);
ComplexField compose(const ScalarField& R, const ScalarField& S);

/// Inverse of compose up to phase wrapping. Throws if psi is entirely below
/// the floor.
Decomposition decompose(const ComplexField& psi, double rho_floor);
Decomposition decompose(const ComplexField& psi);  // default floor

/// Per-axis velocity field v = (hbar/m) Im(conj(psi) grad psi) / |psi|^2,
/// zeroed and masked where |psi|^2 < rho_floor. This equals grad(S)/m wherever
/// the phase is smooth, but needs no unwrapping.
struct VelocityField {
    std::array<ScalarField, 2> comp;  // comp[a] valid for a < grid.dim
    Mask mask;
};
VelocityField velocity_field(const ComplexField& psi, double rho_floor);
VelocityField velocity_field(const ComplexField& psi);

/// Quantum potential Q = -(hbar^2/2m) lap(R)/R, zeroed and masked where
/// R^2 < rho_floor.
struct MaskedField {
    ScalarField field;
    Mask mask;
};
MaskedField quantum_potential(const ScalarField& R, double rho_floor);
MaskedField quantum_potential(const ScalarField& R);

}  // namespace clsim
