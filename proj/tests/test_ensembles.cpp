#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "clsim/ensembles.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace clsim;

namespace {

std::vector<double> demo_weights(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (w[i] = double(i + 1));
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

TEST_CASE("bump basis members are orthonormal with disjoint supports") {
    const Grid g(512, 40.0);
    const PositiveBasis basis = PositiveBasis::bumps(g, 8);
    REQUIRE(basis.size() == 8);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        ScalarField rho(g);
        for (std::size_t q = 0; q < g.size(); ++q)
            rho[q] = basis.member(i)[q] * basis.member(i)[q];
        CHECK(norm(rho) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            double max_prod = 0.0;
            for (std::size_t q = 0; q < g.size(); ++q)
                max_prod = std::max(max_prod,
                                    std::abs(basis.member(i)[q] * basis.member(j)[q]));
            CHECK(max_prod == 0.0);  // structurally disjoint, not just small
        }
    }
}

TEST_CASE("overlapping members are rejected at construction") {
    const Grid g(256, 20.0);
    std::vector<ScalarField> members{support::gaussian_R(g, {-1.0, 0.0}, 1.0),
                                     support::gaussian_R(g, {1.0, 0.0}, 1.0)};
    CHECK_THROWS(PositiveBasis(std::move(members)));
}

TEST_CASE("pure and mixed states agree on every diagonal observable") {
    const Grid g(512, 40.0);
    const PositiveBasis basis = PositiveBasis::bumps(g, 6);
    const auto w = demo_weights(6);
    const DensityMatrix pure = pure_density(w);
    const DensityMatrix mixed = mixed_density(w);
    CHECK(pure.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mixed.trace() == doctest::Approx(1.0).epsilon(1e-14));

    // a deliberately lopsided observable
    ScalarField A(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        A[i] = x * x + 3.0 * std::sin(2.0 * pi * x / 40.0);
    }
    const double ep = expect_diagonal(pure, basis, A);
    const double em = expect_diagonal(mixed, basis, A);
    CHECK(std::abs(ep - em) < 1e-12 * std::abs(ep));
}

TEST_CASE("spectra separate the pure state from the mixture") {
    const auto w = demo_weights(5);
    const auto ev_mixed = symmetric_eigenvalues(mixed_density(w));
    REQUIRE(ev_mixed.size() == 5);
    // ascending eigenvalues of diag(w) are the sorted weights
    auto sorted = w;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(ev_mixed[i] == doctest::Approx(sorted[i]).epsilon(1e-12));

    const auto ev_pure = symmetric_eigenvalues(pure_density(w));
    CHECK(ev_pure.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(ev_pure[ev_pure.size() - 2]) < 1e-12);  // rank one
}

TEST_CASE("identity observable has identity matrix elements") {
    const Grid g(512, 40.0);
    const PositiveBasis basis = PositiveBasis::bumps(g, 6);
    const ScalarField one(g, 1.0);
    const DensityMatrix A = observable_matrix(basis, one);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            if (i == j)
                CHECK(A.at(i, j) == doctest::Approx(1.0).epsilon(1e-12));
            else
                CHECK(A.at(i, j) == 0.0);
        }
}

TEST_CASE("disjoint packets carry no exchange weight") {
    const Grid g(1024, 60.0);
    const PositiveBasis basis = PositiveBasis::bumps(g, 8);
    const ExchangeReport rep = exchange_density(basis.member(1), basis.member(5));
    CHECK(rep.overlap == 0.0);
    CHECK(rep.exchange_weight == 0.0);
    CHECK(rep.direct_weight == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("overlapping packets are refused, and their tails follow the Gaussian law") {
    const Grid g(1024, 60.0);
    const ScalarField G1 = support::gaussian_R(g, {-2.0, 0.0}, 1.0);
    const ScalarField G2 = support::gaussian_R(g, {2.0, 0.0}, 1.0);
    CHECK_THROWS(exchange_density(G1, G2));
    // the overlap integral the refusal is protecting against
    for (double q : {4.0, 6.0, 9.0}) {
        const ScalarField A = support::gaussian_R(g, {-q / 2.0, 0.0}, 1.0);
        const ScalarField B = support::gaussian_R(g, {q / 2.0, 0.0}, 1.0);
        CHECK(inner(A, B) == doctest::Approx(oracles::gaussian_overlap(q, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("mean-motion residuals vanish at second order in the frame spacing") {
    const Grid g(1024, 40.0);
    const double omega = 1.0, s0 = 1.4, A = 3.0;
    const Potential V = Potential::harmonic(g, omega);

    // analytic frames of the breathing, swinging packet; residuals then come
    // only from the centered time differences
    auto residual = [&](double frame_dt) {
        DensityFrames density;
        VelocityFrames velocity;
        velocity.grid = g;
        const int count = int(std::lround(0.8 / frame_dt));  // fixed span, varied cadence
        for (int k = 0; k <= count; ++k) {
            const double t = frame_dt * double(k);
            const double c = A * std::cos(omega * t);
            const double cdot = -A * omega * std::sin(omega * t);
            const double s = oracles::breathing_width(s0, g.hbar, g.mass, omega, t);
            const double sq = g.hbar / (2.0 * g.mass * omega * s0);
            const double sdot = (sq * sq - s0 * s0) * omega * std::sin(omega * t) *
                                std::cos(omega * t) / s;
            ScalarField rho(g), v(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double d = g.coord(0, i) - c;
                rho[i] = std::exp(-d * d / (2.0 * s * s)) / (s * std::sqrt(2.0 * pi));
                v[i] = cdot + d * sdot / s;
            }
            density.times.push_back(t);
            density.rho.push_back(rho);
            velocity.times.push_back(t);
            velocity.comp.push_back({std::move(v), ScalarField()});
            velocity.mask.push_back(Mask(g.size(), true));
        }
        return ehrenfest_residuals(density, velocity, V);
    };

    const EhrenfestResiduals coarse = residual(0.02);
    const EhrenfestResiduals fine = residual(0.01);
    CHECK(coarse.max_r2() / fine.max_r2() == doctest::Approx(4.0).epsilon(0.1));
    CHECK(coarse.max_r1() / fine.max_r1() == doctest::Approx(4.0).epsilon(0.1));
    // absolute scale: residuals are small against the force scale m w^2 A
    CHECK(fine.max_r2() < 1e-4 * g.mass * omega * omega * A);
}

TEST_CASE("pure-state phase space puts momenta exactly on the flow") {
    const Grid g(512, 40.0);
    const double p = g.nearest_mode(0, 1.0) * g.hbar;
    const PolarPair st = support::gaussian_state(g, 2.0, 1.0, p);
    const PhaseSpaceEnsemble ens = phase_space_from_pure(st, 5000, 11);
    REQUIRE(ens.points.size() == 5000);

    double px_min = 1e300, px_max = -1e300, mean_x = 0.0;
    for (const auto& pt : ens.points) {
        px_min = std::min(px_min, pt.p[0]);
        px_max = std::max(px_max, pt.p[0]);
        mean_x += pt.x[0];
    }
    mean_x /= 5000.0;
    // S = p x exactly, so every sampled momentum equals p
    CHECK(px_min == doctest::Approx(p).epsilon(1e-9));
    CHECK(px_max == doctest::Approx(p).epsilon(1e-9));
    CHECK(std::abs(mean_x - 2.0) < 5.0 / std::sqrt(5000.0));
}

TEST_CASE("momentum-agnostic ensembles fill the declared box") {
    const Grid g(512, 40.0);
    const ScalarField R = support::gaussian_R(g, {0.0, 0.0}, 1.0);
    const double p_box = 2.5;
    const PhaseSpaceEnsemble ens = phase_space_from_R(R, p_box, 20000, 5);

    double mean_p = 0.0, var_p = 0.0, abs_max = 0.0;
    for (const auto& pt : ens.points) {
        mean_p += pt.p[0];
        var_p += pt.p[0] * pt.p[0];
        abs_max = std::max(abs_max, std::abs(pt.p[0]));
    }
    mean_p /= double(ens.points.size());
    var_p = var_p / double(ens.points.size()) - mean_p * mean_p;
    CHECK(abs_max <= p_box);
    CHECK(std::abs(mean_p) < 5.0 * p_box / std::sqrt(3.0 * 20000.0));
    // uniform variance p_box^2 / 3
    CHECK(var_p == doctest::Approx(p_box * p_box / 3.0).epsilon(0.05));
}

TEST_CASE("phase-space evolution closes harmonic orbits") {
    const Grid g(512, 40.0);
    const double omega = 1.0;
    const Potential V = Potential::harmonic(g, omega);
    PhaseSpaceEnsemble ens;
    ens.grid = g;
    ens.points.push_back({{5.0, 0.0}, {0.0, 0.0}, 1.0});
    ens.points.push_back({{-2.0, 0.0}, {3.0, 0.0}, 1.0});

    auto energy = [&](const PhaseSpacePoint& pt) {
        return pt.p[0] * pt.p[0] / (2.0 * g.mass) + V.value(pt.x, 0.0);
    };
    const double e0 = energy(ens.points[0]), e1 = energy(ens.points[1]);

    const double T = 2.0 * pi / omega;
    evolve_phase_space(ens, V, 0.0, T, T / 4000.0);
    CHECK(ens.points[0].x[0] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(std::abs(ens.points[0].p[0]) < 1e-7);
    CHECK(energy(ens.points[0]) == doctest::Approx(e0).epsilon(1e-10));
    CHECK(energy(ens.points[1]) == doctest::Approx(e1).epsilon(1e-10));
}

TEST_CASE("phase-space position marginal matches its source density") {
    const Grid g(512, 40.0);
    const PolarPair st = support::gaussian_state(g, 0.0, 1.0);
    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) rho[i] = st.R[i] * st.R[i];
    const PhaseSpaceEnsemble ens = phase_space_from_pure(st, 20000, 21);
    CHECK(phase_space_position_l1(ens, rho, 64) < 0.05);
}
