#include "clsim/polar.hpp"

#include <cmath>

namespace clsim {

ScalarField action_gradient(const ActionField& S, int axis) {
    ScalarField g = gradient(S.periodic, axis);
    const double s = S.slope[axis];
    if (s != 0.0)
        for (double& x : g.v) x += s;
    return g;
}

ScalarField action_laplacian(const ActionField& S) { return laplacian(S.periodic); }

ComplexField compose(const PolarPair& p) {
    check_same_grid(p.R, p.S.periodic, "compose");
    const Grid& g = p.R.grid;
    ComplexField psi(g);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (p.R[i] < 0) throw Error("compose: negative amplitude");
        psi[i] = std::polar(p.R[i], p.S.total(i) / g.hbar);
    }
    return psi;
}

ComplexField compose(const ScalarField& R, const ScalarField& S) {
    return compose(PolarPair{R, ActionField(S)});
}

Decomposition decompose(const ComplexField& psi, double rho_floor) {
    if (!(rho_floor > 0)) throw Error("decompose: rho_floor must be positive");
    const Grid& g = psi.grid;
    Decomposition d{PolarPair{ScalarField(g), ActionField(g)}, Mask(g.size())};
    bool any = false;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double rho = std::norm(psi[i]);
        d.pair.R[i] = std::sqrt(rho);
        if (rho < rho_floor) {
            d.pair.S.periodic[i] = 0.0;
            d.phase_defined.set(i, false);
        } else {
            // atan2 lands in (-pi, pi], so S is wrapped to (-pi hbar, pi hbar]
            d.pair.S.periodic[i] = g.hbar * std::atan2(psi[i].imag(), psi[i].real());
            any = true;
        }
    }
    if (!any) throw Error("decompose: field is entirely below rho_floor");
    return d;
}

Decomposition decompose(const ComplexField& psi) {
    return decompose(psi, default_rho_floor(psi));
}

VelocityField velocity_field(const ComplexField& psi, double rho_floor) {
    if (!(rho_floor > 0)) throw Error("velocity_field: rho_floor must be positive");
    const Grid& g = psi.grid;
    VelocityField out;
    out.mask = Mask(g.size());
    for (int a = 0; a < g.dim; ++a) {
        const ComplexField dpsi = gradient(psi, a);
        out.comp[a] = ScalarField(g);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double rho = std::norm(psi[i]);
            if (rho < rho_floor) {
                out.comp[a][i] = 0.0;
                if (a == 0) out.mask.set(i, false);
            } else {
                // v = (hbar/m) Im(conj(psi) dpsi) / rho; equals grad(S)/m
                // where the phase is smooth, with no unwrapping required
                out.comp[a][i] = g.hbar / g.mass * std::imag(std::conj(psi[i]) * dpsi[i]) / rho;
            }
        }
    }
    return out;
}

VelocityField velocity_field(const ComplexField& psi) {
    return velocity_field(psi, default_rho_floor(psi));
}

MaskedField quantum_potential(const ScalarField& R, double rho_floor) {
    if (!(rho_floor > 0)) throw Error("quantum_potential: rho_floor must be positive");
    const Grid& g = R.grid;
    const ScalarField lapR = laplacian(R);
    MaskedField out{ScalarField(g), Mask(g.size())};
    const double c = -g.hbar * g.hbar / (2.0 * g.mass);
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (R[i] * R[i] < rho_floor) {
            out.mask.set(i, false);
        } else {
            out.field[i] = c * lapR[i] / R[i];
        }
    }
    return out;
}

MaskedField quantum_potential(const ScalarField& R) {
    ScalarField rho(R.grid);
    for (std::size_t i = 0; i < R.size(); ++i) rho[i] = R[i] * R[i];
    return quantum_potential(R, default_rho_floor(rho));
}

}  // namespace clsim
