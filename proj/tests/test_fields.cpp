#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "clsim/field.hpp"
#include "clsim/grid.hpp"
#include "clsim/interp.hpp"
#include "clsim/parallel.hpp"
#include "clsim/polar.hpp"
#include "clsim/potential.hpp"
#include "clsim/rng.hpp"
#include "clsim/spectral.hpp"
#include "doctest.h"

using namespace clsim;

TEST_CASE("grid geometry round trips") {
    const Grid g(256, 32.0);
    CHECK(g.dim == 1);
    CHECK(g.spacing(0) == doctest::Approx(0.125));
    CHECK(g.coord(0, 0) == doctest::Approx(-16.0));
    CHECK(g.coord(0, 128) == doctest::Approx(0.0));
    CHECK(g.cell_volume() == doctest::Approx(0.125));

    const Grid g2(64, 128, 8.0, 16.0, 1.0, 1.0);
    CHECK(g2.dim == 2);
    CHECK(g2.size() == 64 * 128);
    for (std::size_t i : {0ul, 17ul, 63ul})
        for (std::size_t j : {0ul, 80ul, 127ul}) {
            const auto u = g2.unpack(g2.index(i, j));
            CHECK(u[0] == i);
            CHECK(u[1] == j);
        }
}

TEST_CASE("grid rejects invalid shapes") {
    CHECK_THROWS(Grid(100, 10.0));   // not a power of two
    CHECK_THROWS(Grid(2, 10.0));     // below minimum
    CHECK_THROWS(Grid(64, -1.0));    // non-positive extent
    CHECK_THROWS(Grid(64, 10.0, 0.0, 1.0));  // hbar must be positive
}

TEST_CASE("wrap and min_image map into the principal cell") {
    const Grid g(64, 10.0);
    CHECK(g.wrap(0, 5.0) == doctest::Approx(-5.0));  // seam maps to the left edge
    CHECK(g.wrap(0, 7.5) == doctest::Approx(-2.5));
    CHECK(g.wrap(0, -6.0) == doctest::Approx(4.0));
    // shortest signed displacement from a to b
    CHECK(g.min_image(0, 4.0, -4.0) == doctest::Approx(2.0));
    CHECK(g.min_image(0, -4.0, 4.0) == doctest::Approx(-2.0));
    CHECK(g.min_image(0, 1.0, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("nearest_mode lands on the reciprocal lattice") {
    const Grid g(1024, 40.0);
    const double k = g.nearest_mode(0, 5.0);
    CHECK(k == doctest::Approx(2.0 * pi * 32.0 / 40.0));  // mode 32
    // a lattice mode is its own nearest mode
    CHECK(g.nearest_mode(0, k) == doctest::Approx(k));
}

TEST_CASE("spectral derivatives are exact on lattice modes") {
    const Grid g(128, 7.0);
    const double k = 2.0 * pi * 5.0 / 7.0;
    ScalarField f(g), g1(g), g2(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = g.coord(0, i);
        f[i] = std::sin(k * x);
        g1[i] = k * std::cos(k * x);
        g2[i] = -k * k * std::sin(k * x);
    }
    const ScalarField df = gradient(f, 0);
    const ScalarField lf = laplacian(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(df[i] == doctest::Approx(g1[i]).epsilon(1e-12));
        CHECK(lf[i] == doctest::Approx(g2[i]).epsilon(1e-12));
    }
}

TEST_CASE("antiderivative inverts the gradient up to the mean") {
    const Grid g(256, 11.0);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = g.coord(0, i);
        f[i] = std::cos(2.0 * pi * x / 11.0) + 0.4 * std::sin(3.0 * 2.0 * pi * x / 11.0);
    }
    const ScalarField F = antiderivative(gradient(f, 0), 0);
    double mean = 0.0;
    for (double v : f.v) mean += v;
    mean /= double(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(F[i] + mean == doctest::Approx(f[i]).epsilon(1e-12));
}

TEST_CASE("2D spectral gradient separates axes") {
    const Grid g(64, 64, 6.0, 6.0, 1.0, 1.0);
    const double k = 2.0 * pi / 6.0;
    ScalarField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto p = g.point(i);
        f[i] = std::sin(k * p[0]) * std::cos(2.0 * k * p[1]);
    }
    const ScalarField fx = gradient(f, 0);
    const ScalarField fy = gradient(f, 1);
    for (std::size_t i = 0; i < f.size(); i += 7) {
        const auto p = g.point(i);
        CHECK(fx[i] == doctest::Approx(k * std::cos(k * p[0]) * std::cos(2.0 * k * p[1]))
                           .epsilon(1e-11));
        CHECK(fy[i] ==
              doctest::Approx(-2.0 * k * std::sin(k * p[0]) * std::sin(2.0 * k * p[1]))
                  .epsilon(1e-11));
    }
}

TEST_CASE("compose/decompose round trip with a lattice slope") {
    const Grid g(256, 20.0);
    const double p = g.nearest_mode(0, 3.0) * g.hbar;
    ScalarField R(g);
    ScalarField Sper(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        R[i] = std::exp(-x * x / 4.0);
        Sper[i] = 0.3 * std::sin(2.0 * pi * x / 20.0);
    }
    double nrm = 0.0;
    for (double r : R.v) nrm += r * r;
    for (double& r : R.v) r /= std::sqrt(nrm * g.cell_volume());

    ActionField S(g, {p, 0});
    S.periodic = Sper;
    const ComplexField psi = compose(PolarPair{R, S});
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-12));

    const Decomposition d = decompose(psi);
    // recovered R matches everywhere; phase only where the density is alive
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(d.pair.R[i] == doctest::Approx(R[i]).epsilon(1e-10));
        if (d.phase_defined[i] && R[i] > 1e-6) {
            const double want = std::remainder(p * g.coord(0, i) + Sper[i], 2.0 * pi * g.hbar);
            const double got = std::remainder(d.pair.S.total(i), 2.0 * pi * g.hbar);
            CHECK(std::abs(std::remainder(got - want, 2.0 * pi * g.hbar)) < 1e-9);
        }
    }
}

TEST_CASE("quantum potential of a Gaussian matches the closed form") {
    // R = exp(-x^2/4s^2) gives Q = hbar^2/(4 m s^2) - hbar^2 x^2/(8 m s^4)
    const Grid g(512, 30.0, 1.0, 1.5);
    const double s = 1.2;
    ScalarField R(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        R[i] = std::exp(-x * x / (4.0 * s * s));
    }
    const MaskedField Q = quantum_potential(R);
    for (double target : {0.0, 0.7, -1.3, 2.1}) {
        const std::size_t i = std::size_t(std::lround((target + 15.0) / g.spacing(0)));
        const double x = g.coord(0, i);  // nearest lattice point, not target itself
        const double want =
            1.0 / (4.0 * g.mass * s * s) - x * x / (8.0 * g.mass * s * s * s * s);
        REQUIRE(Q.mask[i]);
        CHECK(Q.field[i] == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("velocity field of a boosted packet is the boost") {
    const Grid g(256, 20.0);
    const double p = g.nearest_mode(0, 2.0) * g.hbar;
    ScalarField R(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        R[i] = std::exp(-x * x);
    }
    const ComplexField psi = compose(PolarPair{R, ActionField(g, {p, 0})});
    const VelocityField v = velocity_field(psi);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (v.mask[i]) CHECK(v.comp[0][i] == doctest::Approx(p / g.mass).epsilon(1e-8));
}

TEST_CASE("harmonic potential is exact in the core and flat far out") {
    const Grid g(512, 40.0, 1.0, 2.0);
    const Potential V = Potential::harmonic(g, 1.5);
    for (double x : {0.0, 3.0, -6.5, 10.0}) {
        CHECK(V.value({x, 0}, 0.0) == doctest::Approx(0.5 * 2.0 * 1.5 * 1.5 * x * x));
        CHECK(V.grad({x, 0}, 0.0)[0] == doctest::Approx(2.0 * 1.5 * 1.5 * x).epsilon(1e-12));
    }
    // saturation: no force beyond the blend band
    CHECK(V.grad({19.0, 0}, 0.0)[0] == doctest::Approx(0.0));
    CHECK(V.grad({-19.5, 0}, 0.0)[0] == doctest::Approx(0.0));
}

TEST_CASE("interpolation error decays with stencil order") {
    const Grid g(64, 9.0);
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = std::sin(2.0 * pi * g.coord(0, i) / 9.0);
    double prev = 1.0;
    for (int order : {1, 3, 5, 7}) {
        double err = 0.0;
        for (int q = 0; q < 50; ++q) {
            const double x = -4.5 + 9.0 * (q + 0.31) / 50.0;
            err = std::max(err, std::abs(interp_at(f, {x, 0}, order) -
                                         std::sin(2.0 * pi * x / 9.0)));
        }
        CHECK(err < prev * 0.2);  // at least a 5x drop per order step
        prev = err;
    }
    CHECK(prev < 1e-9);  // order 7 on a well-resolved mode
}

TEST_CASE("interpolation handles the periodic seam") {
    const Grid g(64, 8.0);
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = std::cos(2.0 * pi * g.coord(0, i) / 8.0);
    // points outside the principal cell wrap
    CHECK(interp_at(f, {4.05, 0}, 7) == doctest::Approx(std::cos(2.0 * pi * 4.05 / 8.0)).epsilon(1e-9));
    CHECK(interp_at(f, {-12.0, 0}, 7) == doctest::Approx(std::cos(2.0 * pi * 4.0 / 8.0)).epsilon(1e-9));
}

TEST_CASE("split streams are deterministic and independent") {
    SplitStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_equal = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && (va == vb);
        any_equal = any_equal || (va == vc);
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal);

    SplitStream d(1, 2);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("density sampling reproduces the first two moments") {
    const Grid g(512, 24.0);
    const double mu = 1.5, s = 0.8;
    ScalarField rho(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, i);
        rho[i] = std::exp(-(x - mu) * (x - mu) / (2.0 * s * s));
    }
    SplitStream rng(20260816, 0);
    const DensitySampler sampler(rho);
    const std::size_t n = 40000;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sampler(rng)[0];
        m1 += x;
        m2 += x * x;
    }
    m1 /= double(n);
    m2 = m2 / double(n) - m1 * m1;
    // 5 sigma bounds on the sample moments; the stream is fixed so this is deterministic
    CHECK(std::abs(m1 - mu) < 5.0 * s / std::sqrt(double(n)));
    CHECK(std::abs(std::sqrt(m2) - s) < 5.0 * s / std::sqrt(2.0 * double(n)));
}

TEST_CASE("sampling an empty density is an error") {
    const Grid g(64, 8.0);
    ScalarField rho(g);  // identically zero
    SplitStream rng(1, 1);
    CHECK_THROWS_AS(sample_density(rho, rng), SamplingError);
}

TEST_CASE("parallel_for covers the range exactly once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
