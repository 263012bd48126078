#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "clsim/grid.hpp"

namespace clsim {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Bad user-supplied configuration (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Real samples on a Grid, row-major.
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

/// Complex samples on a Grid, row-major.
struct ComplexField {
    Grid grid;
    std::vector<cplx> v;

    ComplexField() = default;
    explicit ComplexField(const Grid& g, cplx fill = {}) : grid(g), v(g.size(), fill) {}

    cplx& operator[](std::size_t i) { return v[i]; }
    cplx operator[](std::size_t i) const { return v[i]; }
    std::size_t size() const { return v.size(); }
};

/// Per-point validity flags for operations that are undefined where the
/// density underflows (1 = defined).
struct Mask {
    std::vector<std::uint8_t> defined;

    Mask() = default;
    explicit Mask(std::size_t n, bool value = true) : defined(n, value ? 1 : 0) {}
    bool operator[](std::size_t i) const { return defined[i] != 0; }
    void set(std::size_t i, bool value) { defined[i] = value ? 1 : 0; }
    std::size_t count_defined() const {
        std::size_t c = 0;
        for (auto d : defined) c += d;
        return c;
    }
    bool all_defined() const { return count_defined() == defined.size(); }
};

template <typename F>
void check_same_grid(const F& a, const F& b, const char* what) {
    if (a.grid != b.grid) throw Error(std::string(what) + ": fields live on different grids");
}

/// Integral of a sampled density: sum * cell volume.
double norm(const ScalarField& rho);
/// L2 norm squared of a complex field: integral of |psi|^2.
double norm(const ComplexField& psi);
/// Integral of a*b.
double inner(const ScalarField& a, const ScalarField& b);

ScalarField density(const ComplexField& psi);

/// Density-weighted mean of the coordinate along an axis. Assumes the mass is
/// localized away from the wrap (moments are taken in the flat chart).
double mean_coord(const ScalarField& rho, int axis);
/// Density-weighted standard deviation of the coordinate along an axis.
double coord_width(const ScalarField& rho, int axis);
/// Density-weighted mean of an arbitrary sampled quantity.
double weighted_mean(const ScalarField& rho, const ScalarField& f);

/// Default density floor for mask decisions: 1e-12 * max(rho).
double default_rho_floor(const ScalarField& rho);
double default_rho_floor(const ComplexField& psi);

}  // namespace clsim
