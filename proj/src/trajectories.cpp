#include "clsim/trajectories.hpp"

#include <algorithm>
#include <cmath>

#include "clsim/interp.hpp"
#include "clsim/parallel.hpp"

namespace clsim {

FrameVelocity::FrameVelocity(const VelocityFrames& frames) : frames_(frames) {
    if (frames_.times.empty()) throw Error("frame velocity: no frames");
    if (frames_.comp.size() != frames_.times.size())
        throw Error("frame velocity: component count does not match frame times");
}

std::array<double, 2> FrameVelocity::velocity(std::array<double, 2> x, double t, bool& ok) const {
    ok = true;
    const auto& times = frames_.times;
    const double tc = std::clamp(t, times.front(), times.back());
    // bracketing frames; frame spacing may be ragged at the ends
    std::size_t hi = std::upper_bound(times.begin(), times.end(), tc) - times.begin();
    if (hi == 0) hi = 1;
    if (hi >= times.size()) hi = times.size() - 1;
    const std::size_t lo = hi - 1;
    const double span = times[hi] - times[lo];
    const double w = span > 0 ? (tc - times[lo]) / span : 0.0;

    if (frames_.any_masked && !frames_.mask.empty()) {
        const Grid& g = frames_.grid;
        std::size_t idx[2] = {0, 0};
        for (int a = 0; a < g.dim; ++a) {
            const double s = (g.wrap(a, x[a]) + 0.5 * g.extent[a]) / g.spacing(a);
            idx[a] = std::size_t(std::lround(s)) % g.n[a];
        }
        const std::size_t flat = g.index(idx[0], idx[1]);
        if (!frames_.mask[lo][flat] || !frames_.mask[hi][flat]) {
            ok = false;
            return {0.0, 0.0};
        }
    }

    std::array<double, 2> v{0.0, 0.0};
    for (int a = 0; a < frames_.grid.dim; ++a) {
        const double vlo = interp_at(frames_.comp[lo][a], x, 3);
        const double vhi = interp_at(frames_.comp[hi][a], x, 3);
        v[a] = (1.0 - w) * vlo + w * vhi;
    }
    return v;
}

Trajectory integrate_trajectory(std::array<double, 2> x0, const VelocitySource& v, double t0,
                                double t1, double dt) {
    if (!(dt > 0)) throw Error("integrate_trajectory: dt must be positive");
    if (t1 < t0) throw Error("integrate_trajectory: t1 < t0");
    const Grid& g = v.grid();

    Trajectory traj;
    auto record = [&](double t, std::array<double, 2> x) {
        for (int a = 0; a < g.dim; ++a) x[a] = g.wrap(a, x[a]);
        traj.times.push_back(t);
        traj.x.push_back(x);
    };

    // integration keeps the unwrapped point so analytic sources see a smooth
    // coordinate; only the recorded samples are wrapped
    std::array<double, 2> x = x0;
    double t = t0;
    record(t, x);
    while (t < t1 - 1e-12 * std::max(1.0, std::abs(t1))) {
        const double h = std::min(dt, t1 - t);
        bool ok = true;
        const auto k1 = v.velocity(x, t, ok);
        if (!ok) { traj.aborted = true; return traj; }
        const auto k2 = v.velocity({x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]}, t + 0.5 * h, ok);
        if (!ok) { traj.aborted = true; return traj; }
        const auto k3 = v.velocity({x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]}, t + 0.5 * h, ok);
        if (!ok) { traj.aborted = true; return traj; }
        const auto k4 = v.velocity({x[0] + h * k3[0], x[1] + h * k3[1]}, t + h, ok);
        if (!ok) { traj.aborted = true; return traj; }
        for (int a = 0; a < 2; ++a)
            x[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        t += h;
        record(t, x);
    }
    return traj;
}

TrajectoryEnsemble propagate_ensemble(const ScalarField& rho0, const VelocitySource& v,
                                      std::size_t n, double t0, double t1, double dt,
                                      std::uint64_t seed, int threads) {
    if (n == 0) throw Error("propagate_ensemble: n must be positive");
    if (rho0.grid != v.grid()) throw Error("propagate_ensemble: density and source grids differ");
    DensitySampler sampler(rho0);

    TrajectoryEnsemble ens;
    ens.members.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        SplitStream rng(seed, i);
        const auto x0 = sampler(rng);
        ens.members[i] = integrate_trajectory(x0, v, t0, t1, dt);
    });
    for (const auto& m : ens.members) ens.aborted_count += m.aborted ? 1 : 0;
    return ens;
}

std::array<double, 2> indirect_momentum(const Grid& g, std::array<double, 2> x1, double t1,
                                        std::array<double, 2> x2, double t2) {
    if (!(t2 > t1)) throw Error("indirect_momentum: need t2 > t1");
    std::array<double, 2> p{0.0, 0.0};
    for (int a = 0; a < g.dim; ++a)
        p[a] = g.mass * g.min_image(a, x1[a], x2[a]) / (t2 - t1);
    return p;
}

namespace {

/// Position of a member at time t, linear between samples, minimal-image
/// across the wrap. Returns false if t is outside the member's recorded span
/// (aborted members stop early).
bool sample_position(const Grid& g, const Trajectory& traj, double t, std::array<double, 2>& out) {
    if (traj.times.empty() || t < traj.times.front() - 1e-12 || t > traj.times.back() + 1e-12)
        return false;
    const double tc = std::clamp(t, traj.times.front(), traj.times.back());
    std::size_t hi = std::upper_bound(traj.times.begin(), traj.times.end(), tc) - traj.times.begin();
    if (hi == 0) hi = 1;
    if (hi >= traj.times.size()) hi = traj.times.size() - 1;
    const std::size_t lo = hi - 1;
    const double span = traj.times[hi] - traj.times[lo];
    const double w = span > 0 ? (tc - traj.times[lo]) / span : 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double step = g.min_image(a, traj.x[lo][a], traj.x[hi][a]);
        out[a] = g.wrap(a, traj.x[lo][a] + w * step);
    }
    return true;
}

}  // namespace

std::vector<double> position_histogram(const Grid& g, const TrajectoryEnsemble& ens, double t,
                                       int axis, std::size_t bins) {
    if (bins == 0) throw Error("position_histogram: bins must be positive");
    if (axis < 0 || axis >= g.dim) throw Error("position_histogram: axis out of range");
    if (ens.members.empty()) throw Error("position_histogram: empty ensemble");
    std::vector<double> h(bins, 0.0);
    const double binw = g.extent[axis] / double(bins);
    std::size_t counted = 0;
    for (const auto& m : ens.members) {
        if (m.aborted) continue;
        std::array<double, 2> x;
        if (!sample_position(g, m, t, x)) continue;
        auto b = std::size_t((x[axis] + 0.5 * g.extent[axis]) / binw);
        if (b >= bins) b = bins - 1;
        h[b] += 1.0;
        ++counted;
    }
    if (counted == 0) throw Error("position_histogram: no member covers the requested time");
    for (auto& v : h) v /= double(counted);
    return h;
}

double histogram_l1(const TrajectoryEnsemble& ens, double t, const ScalarField& rho,
                    std::size_t bins) {
    const Grid& g = rho.grid;
    if (g.dim != 1) throw Error("histogram_l1: 1D densities only");
    if (bins == 0 || g.n[0] % bins != 0)
        throw Error("histogram_l1: bins must evenly divide the grid");

    const std::vector<double> h = position_histogram(g, ens, t, 0, bins);

    std::vector<double> q(bins, 0.0);
    const std::size_t per = g.n[0] / bins;
    double total = 0.0;
    for (std::size_t i = 0; i < g.n[0]; ++i) {
        q[i / per] += rho[i];
        total += rho[i];
    }
    if (total <= 0) throw Error("histogram_l1: zero density");
    double l1 = 0.0;
    for (std::size_t b = 0; b < bins; ++b) l1 += std::abs(h[b] - q[b] / total);
    return l1;
}

Trajectory crest_track(const DensityFrames& frames, std::array<double, 2> x0,
                       std::array<double, 2> window_halfwidth) {
    if (frames.rho.empty()) throw Error("crest_track: no frames");
    const Grid& g = frames.rho.front().grid;

    std::array<double, 2> center = x0;
    Trajectory traj;
    for (std::size_t f = 0; f < frames.count(); ++f) {
        const ScalarField& rho = frames.rho[f];
        // integer window around the current center
        std::array<long, 2> ci{0, 0}, wi{0, 1};
        for (int a = 0; a < g.dim; ++a) {
            ci[a] = std::lround((g.wrap(a, center[a]) + 0.5 * g.extent[a]) / g.spacing(a));
            wi[a] = std::max<long>(2, long(window_halfwidth[a] / g.spacing(a)));
        }
        double best = -1.0;
        std::array<long, 2> off_best{0, 0};
        const long w1 = g.dim == 2 ? wi[1] : 0;
        for (long o0 = -wi[0]; o0 <= wi[0]; ++o0)
            for (long o1 = -w1; o1 <= w1; ++o1) {
                const std::size_t i0 = std::size_t((ci[0] + o0 + 4 * long(g.n[0]))) % g.n[0];
                const std::size_t i1 = g.dim == 2
                    ? std::size_t((ci[1] + o1 + 4 * long(g.n[1]))) % g.n[1]
                    : 0;
                const double val = rho[g.index(i0, i1)];
                if (val > best) {
                    best = val;
                    off_best = {o0, o1};
                }
            }
        if (std::abs(off_best[0]) == wi[0] || (g.dim == 2 && std::abs(off_best[1]) == w1))
            throw CrestLossError("crest left the tracking window at t = " +
                                 std::to_string(frames.times[f]));

        // per-axis parabolic refinement through the discrete maximum; on log
        // density this is exact for a Gaussian crest
        std::array<double, 2> crest{0.0, 0.0};
        std::array<std::size_t, 2> bi{std::size_t((ci[0] + off_best[0] + 4 * long(g.n[0]))) % g.n[0],
                                      g.dim == 2
                                          ? std::size_t((ci[1] + off_best[1] + 4 * long(g.n[1]))) % g.n[1]
                                          : 0};
        for (int a = 0; a < g.dim; ++a) {
            auto at = [&](long off) {
                std::array<std::size_t, 2> j = bi;
                j[a] = std::size_t((long(j[a]) + off + long(g.n[a]))) % g.n[a];
                return rho[g.index(j[0], j[1])];
            };
            double fm = at(-1), f0 = at(0), fp = at(+1);
            if (fm > 0 && f0 > 0 && fp > 0) {
                fm = std::log(fm);
                f0 = std::log(f0);
                fp = std::log(fp);
            }
            const double denom = fm - 2.0 * f0 + fp;
            double delta = 0.0;
            if (std::abs(denom) > 1e-300) delta = 0.5 * (fm - fp) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
            crest[a] = g.wrap(a, g.coord(a, bi[a]) + delta * g.spacing(a));
        }
        traj.times.push_back(frames.times[f]);
        traj.x.push_back(crest);
        center = crest;
    }
    return traj;
}

}  // namespace clsim
