#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "clsim/classical_solver.hpp"
#include "clsim/trajectories.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace clsim;

namespace {

EvolveOptions quiet(std::size_t steps) {
    EvolveOptions opt;
    opt.steps = steps;
    opt.observe_stride = steps;
    opt.frame_stride = steps;
    opt.capture_velocity = false;
    return opt;
}

}  // namespace

TEST_CASE("a resting packet does not spread") {
    const Grid g(512, 40.0);
    PolarPair st = support::gaussian_state(g, 0.0, 1.0);
    const double w0 = packet_width(density(compose(st)))[0];

    ClassicalStepper::Params prm;
    prm.dt = 1e-3;
    ClassicalStepper stepper(g, Potential::zero(g), prm);
    const RunRecord rec = evolve_classical(st, stepper, 0.0, quiet(2000));

    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
    CHECK(packet_width(rho)[0] == doctest::Approx(w0).epsilon(1e-12));
    CHECK(norm(rho) == doctest::Approx(1.0).epsilon(1e-12));
    // the action picked up no structure either
    for (double s : st.S.periodic.v) CHECK(std::abs(s) < 1e-12);
}

TEST_CASE("focusing flow contracts at the closed-form rate") {
    const Grid g(512, 40.0);
    const double a = 0.25, s0 = 1.0;
    const oracles::FocusingFlow flow{a, g.mass};
    PolarPair st = support::focusing_state(g, a, s0, 8.0, 4.0);

    const double t_end = 0.5 * flow.focus_time();
    const std::size_t steps = 1000;
    ClassicalStepper::Params prm;
    prm.dt = t_end / double(steps);
    prm.interp_order = 7;  // the contracting profile sharpens, order 3 leaks ~4e-5 mass
    ClassicalStepper stepper(g, Potential::zero(g), prm);
    EvolveOptions opt = quiet(steps);
    opt.norm_drift_abort = 1e-4;
    evolve_classical(st, stepper, 0.0, opt);

    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
    CHECK(packet_width(rho)[0] ==
          doctest::Approx(s0 * flow.width_factor(t_end)).epsilon(5e-5));
    CHECK(norm(rho) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("focusing flow trips the caustic monitor near the focal time") {
    const Grid g(512, 40.0);
    const double a = 0.25;
    const oracles::FocusingFlow flow{a, g.mass};
    PolarPair st = support::focusing_state(g, a, 1.0, 8.0, 4.0);

    ClassicalStepper::Params prm;
    prm.dt = 5e-3;
    prm.clamp_budget = 0.05;  // the packet passes through grid scale right before the trip
    ClassicalStepper stepper(g, Potential::zero(g), prm);
    EvolveOptions opt = quiet(std::size_t(1.1 * flow.focus_time() / prm.dt));
    opt.norm_drift_abort = 0.05;

    bool tripped = false;
    try {
        evolve_classical(st, stepper, 0.0, opt);
    } catch (const CausticError& e) {
        tripped = true;
        CHECK(std::abs(e.report.time - flow.focus_time()) < 0.1 * flow.focus_time());
        CHECK(e.report.value * prm.dt / g.mass > prm.caustic_threshold);
    }
    CHECK(tripped);
}

TEST_CASE("linear potential translates the packet rigidly") {
    // wide domain and a gentle force: the turnaround band of the periodic
    // linear potential focuses characteristics at t ~ 6.5 here, twice the run
    const Grid g(1024, 80.0);
    const double F = 0.15, x0 = -6.0, t_end = 3.0;
    PolarPair st = support::gaussian_state(g, x0, 1.0);
    const double w0 = packet_width(density(compose(st)))[0];

    ClassicalStepper::Params prm;
    prm.dt = 1e-3;
    prm.interp_order = 7;  // rigid-shape claim needs transport error near round-off
    ClassicalStepper stepper(g, Potential::linear(g, {F, 0.0}, 12.0), prm);
    evolve_classical(st, stepper, 0.0, quiet(3000));

    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
    CHECK(mean_coord(rho, 0) ==
          doctest::Approx(oracles::accelerated_center(x0, F, g.mass, t_end)).epsilon(1e-6));
    // no dispersion and no shape change under a uniform force
    CHECK(packet_width(rho)[0] == doctest::Approx(w0).epsilon(1e-7));
}

TEST_CASE("harmonic crest follows the classical orbit") {
    const Grid g(1024, 40.0);
    const double omega = 1.0, A = 6.0;
    const double T = 2.0 * pi / omega;
    PolarPair st = support::gaussian_state(g, A, 1.0);

    ClassicalStepper::Params prm;
    prm.dt = T / 4000.0;  // advective CFL at this resolution: dt * 14 * k_max ~ 1.8
    prm.interp_order = 5;
    ClassicalStepper stepper(g, Potential::harmonic(g, omega), prm);
    EvolveOptions opt;
    opt.steps = std::size_t(1.2 / prm.dt);
    opt.observe_stride = opt.steps;
    opt.frame_stride = 20;
    opt.capture_velocity = false;
    opt.norm_drift_abort = 1e-4;  // order-5 transport leaks ~1e-6 mass by t = 1.2
    const RunRecord rec = evolve_classical(st, stepper, 0.0, opt);

    const Trajectory crest = crest_track(rec.density, {A, 0.0}, {2.0, 0.0});
    const oracles::HarmonicRestFlow flow{omega};
    double max_err = 0.0;
    for (std::size_t k = 0; k < crest.times.size(); ++k)
        max_err = std::max(max_err,
                           std::abs(crest.x[k][0] - flow.position(A, crest.times[k])));
    CHECK(max_err < 1e-4 * A);
}

TEST_CASE("rest release in a harmonic well caustics at the quarter period") {
    const Grid g(1024, 40.0);
    const double omega = 1.0;
    const double quarter = 0.5 * pi / omega;
    PolarPair st = support::gaussian_state(g, 6.0, 1.0);

    ClassicalStepper::Params prm;
    prm.dt = (2.0 * pi / omega) / 4000.0;
    prm.clamp_budget = 0.05;
    ClassicalStepper stepper(g, Potential::harmonic(g, omega), prm);
    EvolveOptions opt = quiet(std::size_t(1.1 * quarter / prm.dt));
    opt.norm_drift_abort = 0.05;

    bool tripped = false;
    try {
        evolve_classical(st, stepper, 0.0, opt);
    } catch (const CausticError& e) {
        tripped = true;
        CHECK(std::abs(e.report.time - quarter) < 0.1 * quarter);
    }
    CHECK(tripped);
}

TEST_CASE("strang composition converges at second order") {
    const Grid g(512, 40.0);
    const double a = 0.25, s0 = 1.0;
    const oracles::FocusingFlow flow{a, g.mass};
    const double t_end = 0.5 * flow.focus_time();

    auto width_error = [&](std::size_t steps) {
        PolarPair st = support::focusing_state(g, a, s0, 8.0, 4.0);
        ClassicalStepper::Params prm;
        prm.dt = t_end / double(steps);
        prm.interp_order = 7;  // spatial error must not mask the time order
        ClassicalStepper stepper(g, Potential::zero(g), prm);
        EvolveOptions opt = quiet(steps);
        opt.norm_drift_abort = 1e-4;  // the coarse run's drift is part of the measured error
        evolve_classical(st, stepper, 0.0, opt);
        ScalarField rho(g);
        for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
        return std::abs(packet_width(rho)[0] - s0 * flow.width_factor(t_end));
    };

    const double e1 = width_error(250);
    const double e2 = width_error(500);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("amplitude scaling commutes with the evolution") {
    // the pair (R, S) and (2R, S) must evolve to the same S and doubled R
    const Grid g(512, 40.0);
    const double omega = 1.0;
    PolarPair st1 = support::gaussian_state(g, 4.0, 1.2);
    PolarPair st2 = st1;
    for (double& r : st2.R.v) r *= 2.0;

    ClassicalStepper::Params prm;
    prm.dt = 1e-3;
    ClassicalStepper s1(g, Potential::harmonic(g, omega), prm);
    ClassicalStepper s2(g, Potential::harmonic(g, omega), prm);
    for (std::size_t s = 0; s < 500; ++s) {
        s1.step(st1, double(s) * prm.dt);
        s2.step(st2, double(s) * prm.dt);
    }
    double max_r = 0.0, max_s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        max_r = std::max(max_r, std::abs(st2.R[i] - 2.0 * st1.R[i]));
        max_s = std::max(max_s, std::abs(st2.S.periodic[i] - st1.S.periodic[i]));
    }
    CHECK(max_r < 1e-12);
    CHECK(max_s < 1e-12);
    CHECK(st2.S.slope[0] == st1.S.slope[0]);
}

TEST_CASE("transport conserves the norm over long runs") {
    const Grid g(1024, 40.0);
    const double omega = 1.0;
    PolarPair st = support::gaussian_state(g, 4.0, 2.0);

    ClassicalStepper::Params prm;
    prm.dt = (2.0 * pi / omega) / 16000.0;
    prm.interp_order = 7;
    ClassicalStepper stepper(g, Potential::harmonic(g, omega), prm);
    const double n0 = norm(density(compose(st)));
    for (std::size_t s = 0; s < 1000; ++s) stepper.step(st, double(s) * prm.dt);

    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
    CHECK(std::abs(norm(rho) / n0 - 1.0) < 1e-8);
    CHECK(stepper.clamped_mass_total() < 1e-6);
}

TEST_CASE("disjoint packets evolve independently inside a superposition") {
    const Grid g(1024, 60.0);
    const double p = 1.0, t_end = 1.0;
    PolarPair left = support::gaussian_state(g, -10.0, 0.8, p);
    PolarPair right = support::gaussian_state(g, 10.0, 0.8, -p);
    for (double& r : left.R.v) r /= std::sqrt(2.0);
    for (double& r : right.R.v) r /= std::sqrt(2.0);

    PolarPair both = superpose_nonoverlapping({left, right});
    // at t = 0 the density is exactly the sum
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(both.R[i] * both.R[i] -
                       (left.R[i] * left.R[i] + right.R[i] * right.R[i])) < 1e-13);

    ClassicalStepper::Params prm;
    prm.dt = 1e-3;
    const Potential V = Potential::zero(g);
    ClassicalStepper sb(g, V, prm), sl(g, V, prm), sr(g, V, prm);
    const std::size_t steps = std::size_t(t_end / prm.dt);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = double(s) * prm.dt;
        sb.step(both, t);
        sl.step(left, t);
        sr.step(right, t);
    }
    double max_diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        max_diff = std::max(max_diff,
                            std::abs(both.R[i] * both.R[i] -
                                     (left.R[i] * left.R[i] + right.R[i] * right.R[i])));
    CHECK(max_diff < 1e-10);
}

TEST_CASE("superposition rejects overlapping supports") {
    const Grid g(256, 20.0);
    PolarPair a = support::gaussian_state(g, -0.5, 1.0);
    PolarPair b = support::gaussian_state(g, 0.5, 1.0);
    CHECK_THROWS(superpose_nonoverlapping({a, b}));
}
