#include "clsim/potential.hpp"

#include <cmath>
#include <mutex>

#include "clsim/spectral.hpp"

namespace clsim {

double smoothstep3(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double s2 = s * s, s4 = s2 * s2;
    return s4 * (35.0 - 84.0 * s + 70.0 * s2 - 20.0 * s2 * s);
}

double smoothstep_order(double s, int q) {
    if (q < 1 || q > 15) throw Error("smoothstep_order: q out of range [1, 15]");
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    // I_s(q+1, q+1) = s^{q+1} sum_k (-1)^k C(q+k, k) C(2q+1, q-k) s^k;
    // binomials up to C(31,15) are exact in double
    double acc = 0.0;
    double c_qk_k = 1.0;  // C(q+k, k), k = 0
    double c_rest = 1.0;  // C(2q+1, q-k), k = 0: computed below
    for (int j = 0; j < q; ++j) c_rest = c_rest * double(2 * q + 1 - j) / double(j + 1);
    double sk = 1.0;
    for (int k = 0; k <= q; ++k) {
        acc += (k % 2 == 0 ? 1.0 : -1.0) * c_qk_k * c_rest * sk;
        // advance k -> k+1
        c_qk_k = c_qk_k * double(q + k + 1) / double(k + 1);
        c_rest = c_rest * double(q - k) / double(q + k + 2);
        sk *= s;
    }
    return std::pow(s, q + 1) * acc;
}

struct Potential::Cache {
    std::mutex mu;
    bool valid = false;
    double t = 0.0;
    ScalarField values;
    std::array<ScalarField, 2> grad;
};

Potential Potential::zero(const Grid& g) {
    Potential p;
    p.grid_ = g;
    p.value_ = [](std::array<double, 2>, double) { return 0.0; };
    p.grad_ = [](std::array<double, 2>, double) { return std::array<double, 2>{0.0, 0.0}; };
    p.cache_ = std::make_shared<Cache>();
    return p;
}

Potential Potential::harmonic(const Grid& g, double omega, double flatten_radius) {
    double r0 = flatten_radius;
    double min_extent = g.extent[0];
    if (g.dim == 2) min_extent = std::min(min_extent, g.extent[1]);
    if (r0 <= 0.0) r0 = 0.35 * min_extent;
    const double band = 0.1 * min_extent;
    const double m = g.mass;
    // V = (m w^2 / 2) s(r)^2 with s(r) = r inside r0, saturating smoothly to
    // r0 + band/2 across the band (s' = 1 - smoothstep3, integrated exactly;
    // the full-band integral of smoothstep3 is 1/2). s is C^3 and monotone,
    // so V and grad V are periodic-smooth and the well is untouched in the
    // core where states live.
    auto sat = [r0, band](double r, double& s, double& ds) {
        if (r <= r0) {
            s = r;
            ds = 1.0;
            return;
        }
        const double u = (r - r0) / band;
        if (u >= 1.0) {
            s = r0 + 0.5 * band;
            ds = 0.0;
            return;
        }
        const double u2 = u * u, u5 = u2 * u2 * u;
        const double I = u - (7.0 * u5 - 14.0 * u5 * u + 10.0 * u5 * u2 - 2.5 * u5 * u2 * u);
        s = r0 + band * I;
        ds = 1.0 - smoothstep3(u);
    };
    Potential p;
    p.grid_ = g;
    p.value_ = [m, omega, sat](std::array<double, 2> x, double) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        double s, ds;
        sat(r, s, ds);
        return 0.5 * m * omega * omega * s * s;
    };
    p.grad_ = [m, omega, sat](std::array<double, 2> x, double) -> std::array<double, 2> {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        double s, ds;
        sat(r, s, ds);
        if (r == 0.0) return {0.0, 0.0};
        const double radial = m * omega * omega * s * ds;  // dV/dr
        return {radial * x[0] / r, radial * x[1] / r};
    };
    p.cache_ = std::make_shared<Cache>();
    return p;
}

Potential Potential::linear(const Grid& g, std::array<double, 2> force, double flatten_radius) {
    double r0 = flatten_radius;
    double min_extent = g.extent[0];
    if (g.dim == 2) min_extent = std::min(min_extent, g.extent[1]);
    if (r0 <= 0.0) r0 = 0.35 * min_extent;
    if (r0 >= 0.5 * min_extent)
        throw Error("linear potential: flatten_radius must be smaller than half the extent");
    // An odd saturation cannot close periodically, so s(x) = x in the core
    // and then turns around: the slope is 1 - c * B'(u) with B = smoothstep3
    // and c = 1 + r0/W, which puts s back at 0 with unit slope at the half
    // extent. V = -F . s is then periodic and C^3, the force equals F in the
    // core and at the seam, and reverses inside the band. The turnaround
    // focuses characteristics on a time scale ~ sqrt(m W / (F c)); keep
    // states inside the core and runs shorter than that.
    auto sat = [r0](double x, double half, double& s, double& ds) {
        const double ax = std::abs(x), sign = x < 0 ? -1.0 : 1.0;
        if (ax <= r0) {
            s = x;
            ds = 1.0;
            return;
        }
        const double W = half - r0;
        const double u = std::min((ax - r0) / W, 1.0);
        const double c = 1.0 + r0 / W;
        s = sign * (r0 + W * (u - c * smoothstep3(u)));
        const double u1 = 1.0 - u;
        ds = 1.0 - c * 140.0 * u * u * u * u1 * u1 * u1;
    };
    Potential p;
    p.grid_ = g;
    const std::array<double, 2> half{0.5 * g.extent[0], 0.5 * g.extent[1]};
    p.value_ = [force, sat, half, dim = g.dim](std::array<double, 2> x, double) {
        double v = 0.0;
        for (int a = 0; a < dim; ++a) {
            double s, ds;
            sat(x[a], half[std::size_t(a)], s, ds);
            v -= force[a] * s;
        }
        return v;
    };
    p.grad_ = [force, sat, half, dim = g.dim](std::array<double, 2> x, double) -> std::array<double, 2> {
        std::array<double, 2> gr{0.0, 0.0};
        for (int a = 0; a < dim; ++a) {
            double s, ds;
            sat(x[a], half[std::size_t(a)], s, ds);
            gr[a] = -force[a] * ds;
        }
        return gr;
    };
    p.cache_ = std::make_shared<Cache>();
    return p;
}

Potential Potential::sampled(ScalarField values) {
    Potential p;
    p.grid_ = values.grid;
    p.cache_ = std::make_shared<Cache>();
    auto& c = *p.cache_;
    c.valid = true;
    c.values = std::move(values);
    for (int a = 0; a < p.grid_.dim; ++a) c.grad[a] = gradient(c.values, a);
    // value/grad lookups fall back to nearest grid sample
    p.value_ = [cache = p.cache_, g = p.grid_](std::array<double, 2> x, double) {
        std::size_t i0 = std::size_t(std::llround((g.wrap(0, x[0]) + 0.5 * g.extent[0]) / g.spacing(0))) % g.n[0];
        std::size_t i1 = 0;
        if (g.dim == 2)
            i1 = std::size_t(std::llround((g.wrap(1, x[1]) + 0.5 * g.extent[1]) / g.spacing(1))) % g.n[1];
        return cache->values[g.index(i0, i1)];
    };
    p.grad_ = [cache = p.cache_, g = p.grid_](std::array<double, 2> x, double) -> std::array<double, 2> {
        std::size_t i0 = std::size_t(std::llround((g.wrap(0, x[0]) + 0.5 * g.extent[0]) / g.spacing(0))) % g.n[0];
        std::size_t i1 = 0;
        if (g.dim == 2)
            i1 = std::size_t(std::llround((g.wrap(1, x[1]) + 0.5 * g.extent[1]) / g.spacing(1))) % g.n[1];
        std::array<double, 2> out{0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) out[a] = cache->grad[a][g.index(i0, i1)];
        return out;
    };
    return p;
}

Potential Potential::analytic(const Grid& g, ValueFn value, GradFn grad, bool time_dependent) {
    Potential p;
    p.grid_ = g;
    p.time_dependent_ = time_dependent;
    p.value_ = std::move(value);
    p.grad_ = std::move(grad);
    p.cache_ = std::make_shared<Cache>();
    return p;
}

std::array<double, 2> Potential::grad(std::array<double, 2> x, double t) const {
    if (grad_) return grad_(x, t);
    return {0.0, 0.0};
}

void Potential::ensure_cache(double t) const {
    auto& c = *cache_;
    if (c.valid && (!time_dependent_ || c.t == t)) return;
    c.values = ScalarField(grid_);
    for (int a = 0; a < grid_.dim; ++a) c.grad[a] = ScalarField(grid_);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const auto x = grid_.point(i);
        c.values[i] = value(x, t);
        const auto gr = grad(x, t);
        for (int a = 0; a < grid_.dim; ++a) c.grad[a][i] = gr[a];
    }
    c.valid = true;
    c.t = t;
}

const ScalarField& Potential::values_at(double t) const {
    if (!cache_) throw Error("potential: default-constructed; use a factory");
    std::lock_guard<std::mutex> lock(cache_->mu);
    ensure_cache(t);
    return cache_->values;
}

const ScalarField& Potential::grad_at(double t, int axis) const {
    if (!cache_) throw Error("potential: default-constructed; use a factory");
    std::lock_guard<std::mutex> lock(cache_->mu);
    ensure_cache(t);
    return cache_->grad[axis];
}

}  // namespace clsim
