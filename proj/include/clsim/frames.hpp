#pragma once

#include <map>
#include <string>
#include <vector>

#include "clsim/polar.hpp"

namespace clsim {

/// Density snapshots at uniform cadence. Frames are decoupled from solver
/// steps: capture every frame_stride steps.
struct DensityFrames {
    std::vector<double> times;
    std::vector<ScalarField> rho;

    std::size_t count() const { return times.size(); }
    double frame_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// Velocity-field snapshots (per-axis components plus a validity mask).
/// Consumers interpolate linearly in time between frames.
struct VelocityFrames {
    Grid grid;
    std::vector<double> times;
    std::vector<std::array<ScalarField, 2>> comp;
    std::vector<Mask> mask;

    std::size_t count() const { return times.size(); }
    bool any_masked = false;
};

/// Tabular time series with fixed columns (t first), written as CSV.
struct ObservationLog {
    std::vector<std::string> columns;  // excludes t
    std::vector<double> times;
    std::vector<std::vector<double>> rows;

    void add(double t, std::vector<double> row) {
        times.push_back(t);
        rows.push_back(std::move(row));
    }
    std::vector<double> column(const std::string& name) const;
};

/// Everything a solver run hands downstream.
struct RunRecord {
    ObservationLog log;
    DensityFrames density;
    VelocityFrames velocity;
    std::vector<std::pair<double, ScalarField>> snapshots;  // sparse full dumps
};

}  // namespace clsim
