#pragma once

#include <functional>
#include <memory>

#include "clsim/frames.hpp"
#include "clsim/rng.hpp"

namespace clsim {

/// Velocity field lookup for trajectory integration. Frame-backed sources
/// interpolate linearly in time and with a 4-point Lagrange stencil in space;
/// analytic sources wrap a closure (used by tests and oracles).
class VelocitySource {
public:
    virtual ~VelocitySource() = default;
    virtual const Grid& grid() const = 0;
    virtual double t_begin() const = 0;
    virtual double t_end() const = 0;
    /// Velocity at (x, t); sets ok = false when the point falls in a masked
    /// (density underflow) region.
    virtual std::array<double, 2> velocity(std::array<double, 2> x, double t, bool& ok) const = 0;
};

class FrameVelocity : public VelocitySource {
public:
    explicit FrameVelocity(const VelocityFrames& frames);
    const Grid& grid() const override { return frames_.grid; }
    double t_begin() const override { return frames_.times.front(); }
    double t_end() const override { return frames_.times.back(); }
    std::array<double, 2> velocity(std::array<double, 2> x, double t, bool& ok) const override;

private:
    const VelocityFrames& frames_;
};

class AnalyticVelocity : public VelocitySource {
public:
    using Fn = std::function<std::array<double, 2>(std::array<double, 2>, double)>;
    AnalyticVelocity(const Grid& g, double t0, double t1, Fn fn)
        : grid_(g), t0_(t0), t1_(t1), fn_(std::move(fn)) {}
    const Grid& grid() const override { return grid_; }
    double t_begin() const override { return t0_; }
    double t_end() const override { return t1_; }
    std::array<double, 2> velocity(std::array<double, 2> x, double t, bool& ok) const override {
        ok = true;
        return fn_(x, t);
    }

private:
    Grid grid_;
    double t0_, t1_;
    Fn fn_;
};

/// A single integrated path. Positions are wrapped into the domain. If the
/// path entered a masked region the trajectory is marked aborted and the
/// samples stop at the last valid time.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, 2>> x;
    bool aborted = false;

    std::array<double, 2> back() const { return x.back(); }
};

/// dx/dt = v(x, t) by classic RK4 with fixed dt, sampling the source at the
/// stage times. Aborts (not an error) when any stage lands in a masked
/// region.
Trajectory integrate_trajectory(std::array<double, 2> x0, const VelocitySource& v, double t0,
                                double t1, double dt);

struct TrajectoryEnsemble {
    std::vector<Trajectory> members;
    std::size_t aborted_count = 0;
    double aborted_fraction() const {
        return members.empty() ? 0.0 : double(aborted_count) / double(members.size());
    }
};

/// Sample n starting points from rho0 (split-stream RNG: member i uses stream
/// i of the seed, so results are independent of threading) and integrate each
/// through the source. threads <= 1 runs serially.
TrajectoryEnsemble propagate_ensemble(const ScalarField& rho0, const VelocitySource& v,
                                      std::size_t n, double t0, double t1, double dt,
                                      std::uint64_t seed, int threads = 1);

/// Momentum recovered from two recorded positions: p = m (x2 - x1)/(t2 - t1),
/// displacement taken minimal-image on the periodic domain.
std::array<double, 2> indirect_momentum(const Grid& g, std::array<double, 2> x1, double t1,
                                        std::array<double, 2> x2, double t2);

/// Fixed-bin histogram of ensemble positions at a given time (linear
/// interpolation along each member's stored path), normalized to unit mass.
/// Aborted members are excluded.
std::vector<double> position_histogram(const Grid& g, const TrajectoryEnsemble& ens, double t,
                                       int axis, std::size_t bins);

/// L1 distance between the ensemble histogram and the same binning of a
/// density field (both normalized). bins must divide the grid size evenly.
double histogram_l1(const TrajectoryEnsemble& ens, double t, const ScalarField& rho,
                    std::size_t bins = 64);

struct CrestLossError : Error {
    using Error::Error;
};

/// Track the density maximum through a frame sequence. Starts from the argmax
/// inside the window around x0 (half-width per axis), refines it with a
/// parabolic fit (on log density when the three samples are positive, which
/// is exact for Gaussian crests), then recentres the window on the previous
/// crest. Throws CrestLossError if the maximum lands on the window edge.
Trajectory crest_track(const DensityFrames& frames, std::array<double, 2> x0,
                       std::array<double, 2> window_halfwidth);

}  // namespace clsim
