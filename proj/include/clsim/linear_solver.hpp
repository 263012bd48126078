#pragma once

#include "clsim/frames.hpp"
#include "clsim/potential.hpp"

namespace clsim {

struct NormDriftError : Error {
    using Error::Error;
};

/// Split-step Fourier stepper for i hbar dpsi/dt = (p^2/2m + V) psi.
/// Strang composition: half potential phase, full kinetic phase in k-space,
/// half potential phase. Each factor has unit modulus, so the step conserves
/// the norm to round-off. Time-dependent potentials are sampled at the step
/// midpoint, which keeps the second-order accuracy.
class LinearStepper {
public:
    LinearStepper(const Grid& grid, Potential potential, double dt);

    const Grid& grid() const { return grid_; }
    double dt() const { return dt_; }
    const Potential& potential() const { return pot_; }

    /// Advance by one step starting at time t (in place).
    void step(ComplexField& psi, double t) const;

private:
    Grid grid_;
    Potential pot_;
    double dt_;
    std::vector<cplx> kinetic_phase_;            // exp(-i hbar k^2 dt / 2m)
    mutable std::vector<cplx> static_pot_phase_;  // cached when V is static
    void potential_phase(double t_mid, std::vector<cplx>& out) const;
};

/// Observation and frame cadences for evolve_* drivers.
struct EvolveOptions {
    std::size_t steps = 0;
    std::size_t observe_stride = 1;    // log cadence in steps
    std::size_t frame_stride = 4;      // density/velocity frame cadence
    std::size_t snapshot_stride = 0;   // 0 = no full snapshots
    bool capture_velocity = true;
    double norm_drift_abort = 1e-8;    // relative; <=0 disables
    double rho_floor = -1.0;           // <0 = default floor per frame
};

/// Run n steps, logging t, norm, mean_x.., width.. and capturing frames.
/// Throws NormDriftError if the norm drifts beyond the configured bound
/// (diagnostic: dt too large for the potential's phase budget).
RunRecord evolve_linear(ComplexField& psi, const LinearStepper& stepper, double t0,
                        const EvolveOptions& opt);

/// Standard deviation of the density along each axis (packet width).
std::array<double, 2> packet_width(const ScalarField& rho);

}  // namespace clsim
