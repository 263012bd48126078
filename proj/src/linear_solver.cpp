#include "clsim/linear_solver.hpp"

#include <cmath>

#include "clsim/spectral.hpp"

namespace clsim {

LinearStepper::LinearStepper(const Grid& grid, Potential potential, double dt)
    : grid_(grid), pot_(std::move(potential)), dt_(dt) {
    if (!(dt > 0)) throw Error("linear stepper: dt must be positive");
    if (pot_.grid() != grid_) throw Error("linear stepper: potential grid mismatch");
    const std::size_t n1 = grid_.dim == 2 ? grid_.n[1] : 1;
    kinetic_phase_.resize(grid_.size());
    for (std::size_t j0 = 0; j0 < grid_.n[0]; ++j0)
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            double k2 = grid_.wavenumber(0, j0) * grid_.wavenumber(0, j0);
            if (grid_.dim == 2) k2 += grid_.wavenumber(1, j1) * grid_.wavenumber(1, j1);
            kinetic_phase_[j0 * n1 + j1] = std::polar(1.0, -grid_.hbar * k2 * dt_ / (2.0 * grid_.mass));
        }
}

void LinearStepper::potential_phase(double t_mid, std::vector<cplx>& out) const {
    const ScalarField& V = pot_.values_at(t_mid);
    out.resize(grid_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::polar(1.0, -V[i] * dt_ / (2.0 * grid_.hbar));
}

void LinearStepper::step(ComplexField& psi, double t) const {
    if (psi.grid != grid_) throw Error("linear step: field grid mismatch");
    // half potential phase, full kinetic phase in k-space, half potential
    // phase; V sampled at the step midpoint keeps second order for V(t)
    const std::vector<cplx>* phase = &static_pot_phase_;
    std::vector<cplx> scratch;
    if (pot_.time_dependent()) {
        potential_phase(t + 0.5 * dt_, scratch);
        phase = &scratch;
    } else if (static_pot_phase_.empty()) {
        potential_phase(0.0, static_pot_phase_);
    }
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= (*phase)[i];
    fft_forward(grid_, psi.v);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= kinetic_phase_[i];
    fft_backward(grid_, psi.v);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= (*phase)[i];
}

std::array<double, 2> packet_width(const ScalarField& rho) {
    std::array<double, 2> w{0.0, 0.0};
    for (int a = 0; a < rho.grid.dim; ++a) w[a] = coord_width(rho, a);
    return w;
}

RunRecord evolve_linear(ComplexField& psi, const LinearStepper& stepper, double t0,
                        const EvolveOptions& opt) {
    RunRecord rec;
    const Grid& g = stepper.grid();
    rec.log.columns = {"norm", "mean_x", "width_x"};
    if (g.dim == 2) rec.log.columns = {"norm", "mean_x", "mean_y", "width_x", "width_y"};
    rec.velocity.grid = g;

    const double norm0 = norm(psi);
    if (norm0 <= 0) throw Error("evolve_linear: empty initial state");
    const std::size_t obs_stride = opt.observe_stride ? opt.observe_stride : 1;
    const std::size_t frm_stride = opt.frame_stride ? opt.frame_stride : 1;

    auto capture = [&](double t) {
        ScalarField rho = density(psi);
        const double nrm = norm(rho);
        if (opt.norm_drift_abort > 0 && std::abs(nrm / norm0 - 1.0) > opt.norm_drift_abort)
            throw NormDriftError("norm drift " + std::to_string(nrm / norm0 - 1.0) +
                                 " at t = " + std::to_string(t) + "; reduce dt");
        std::vector<double> row{nrm};
        for (int a = 0; a < g.dim; ++a) row.push_back(mean_coord(rho, a));
        for (int a = 0; a < g.dim; ++a) row.push_back(coord_width(rho, a));
        rec.log.add(t, std::move(row));
        return rho;
    };

    for (std::size_t s = 0; s <= opt.steps; ++s) {
        const double t = t0 + double(s) * stepper.dt();
        const bool last = s == opt.steps;
        if (s % obs_stride == 0 || last) capture(t);
        if (s % frm_stride == 0 || last) {
            ScalarField rho = density(psi);
            rec.density.times.push_back(t);
            rec.density.rho.push_back(rho);
            if (opt.capture_velocity) {
                const double floor = opt.rho_floor > 0 ? opt.rho_floor : default_rho_floor(rho);
                VelocityField vf = velocity_field(psi, floor);
                rec.velocity.times.push_back(t);
                rec.velocity.comp.push_back(std::move(vf.comp));
                if (!vf.mask.all_defined()) rec.velocity.any_masked = true;
                rec.velocity.mask.push_back(std::move(vf.mask));
            }
        }
        if (opt.snapshot_stride && (s % opt.snapshot_stride == 0 || last))
            rec.snapshots.emplace_back(t, density(psi));
        if (!last) stepper.step(psi, t);
    }
    return rec;
}

}  // namespace clsim
