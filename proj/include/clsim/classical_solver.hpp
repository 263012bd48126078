#pragma once

#include "clsim/frames.hpp"
#include "clsim/linear_solver.hpp"
#include "clsim/potential.hpp"

namespace clsim {

/// Where and when the action field stopped being a single-valued classical
/// flow. Emitted when max|lap S| * dt / m crosses the threshold: past that
/// point characteristics cross within a step and the transported density is
/// no longer meaningful.
struct CausticReport {
    double time = 0.0;
    std::size_t location = 0;     // flat grid index of max |lap S|
    double value = 0.0;           // max |lap S| at trigger
    double threshold = 0.0;       // the |lap S| dt / m bound that tripped
};

struct CausticError : Error {
    CausticReport report;
    explicit CausticError(CausticReport r)
        : Error("caustic: max|lap S| = " + std::to_string(r.value) + " at t = " +
                std::to_string(r.time)),
          report(r) {}
};

/// Coupled classical Hamilton-Jacobi + continuity stepper for the pair
/// (R, S):
///   dS/dt = -( (grad S)^2 / 2m + V )            (RK4, spectral gradients)
///   [d/dt + (grad S/m).grad + (lap S/2m)] R = 0  (semi-Lagrangian)
/// One step is the Strang composition: advance S a half step, transport R a
/// full step through the midpoint flow, advance S the remaining half step.
///
/// The continuity update is linear in R and manifestly sign-preserving:
///   R(x, t+dt) = R(x_dep, t) * exp(-(lap S / 2m) dt)
/// with the departure point from one fixed-point iteration of the implicit
/// midpoint characteristic. Interpolation can still undershoot zero near
/// steep features; negatives are clamped and the clamped mass is accounted.
class ClassicalStepper {
public:
    struct Params {
        double dt = 1e-3;
        double caustic_threshold = 0.5;  // bound on max|lap S| dt / m
        int interp_order = 3;            // R transport stencil (1/3/5/7)
        double clamp_budget = 1e-6;      // max clamped mass per step, relative
    };

    ClassicalStepper(const Grid& grid, Potential potential, Params params);

    const Grid& grid() const { return grid_; }
    double dt() const { return params_.dt; }
    const Params& params() const { return params_; }
    const Potential& potential() const { return pot_; }

    /// Mass removed by positivity clamping so far, relative to the norm.
    double clamped_mass_total() const { return clamped_total_; }

    /// RK4 update of S over dt_s starting at time t. Checks the caustic
    /// monitor on entry and exit. R is untouched.
    ActionField step_hj(const ActionField& S, double t, double dt_s) const;

    /// Semi-Lagrangian transport of R through the flow of S_mid over dt.
    ScalarField step_continuity(const ScalarField& R, const ActionField& S_mid) const;

    /// Full Strang step; advances state in place, returns nothing. t is the
    /// time at entry.
    void step(PolarPair& state, double t) const;

private:
    Grid grid_;
    Potential pot_;
    Params params_;
    mutable double clamped_total_ = 0.0;

    ScalarField hj_rhs(const ActionField& S, double t) const;
    void check_caustic(const ActionField& S, double t) const;
};

/// Smoothness monitor: evaluates the caustic metric without stepping.
CausticReport caustic_monitor(const ActionField& S, const ClassicalStepper& stepper, double t);

/// Run n steps with logging and frame capture; same knobs as evolve_linear.
/// A CausticError thrown mid-run propagates after the log records the frames
/// captured so far (callers can inspect record state via the exception's
/// report plus the partial_record output parameter, if given).
RunRecord evolve_classical(PolarPair& state, const ClassicalStepper& stepper, double t0,
                           const EvolveOptions& opt, RunRecord* partial_on_caustic = nullptr);

/// Sum of disjointly-supported states into one pair: R = sum R_a and S equal
/// to each S_a on the corresponding support, smoothly interpolated across the
/// gaps (where no mass lives, S is gauge). Throws if any two supports
/// overlap above the floor.
PolarPair superpose_nonoverlapping(const std::vector<PolarPair>& states, double rho_floor = -1.0);

}  // namespace clsim
