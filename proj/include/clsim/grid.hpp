#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace clsim {

inline constexpr double pi = 3.14159265358979323846;

/// Uniform periodic grid in 1 or 2 dimensions, centered on the origin.
/// Points along axis a sit at x_i = -extent[a]/2 + i*spacing(a), i = 0..n[a]-1;
/// the point at +extent/2 is identified with the one at -extent/2.
/// n must be a power of two (spectral transforms assume it).
struct Grid {
    int dim = 1;
    std::array<std::size_t, 2> n = {0, 1};
    std::array<double, 2> extent = {0.0, 0.0};
    double hbar = 1.0;
    double mass = 1.0;

    Grid() = default;
    Grid(std::size_t n0, double extent0, double hbar_ = 1.0, double mass_ = 1.0)
        : dim(1), n{n0, 1}, extent{extent0, 0.0}, hbar(hbar_), mass(mass_) { validate(); }
    Grid(std::size_t n0, std::size_t n1, double extent0, double extent1,
         double hbar_ = 1.0, double mass_ = 1.0)
        : dim(2), n{n0, n1}, extent{extent0, extent1}, hbar(hbar_), mass(mass_) { validate(); }

    std::size_t size() const { return n[0] * (dim == 2 ? n[1] : 1); }
    double spacing(int axis) const { return extent[axis] / double(n[axis]); }
    double coord(int axis, std::size_t i) const { return -0.5 * extent[axis] + double(i) * spacing(axis); }

    /// Volume (length/area) element.
    double cell_volume() const {
        double v = spacing(0);
        if (dim == 2) v *= spacing(1);
        return v;
    }

    /// Row-major flat index; iy ignored in 1D.
    std::size_t index(std::size_t ix, std::size_t iy = 0) const {
        return dim == 2 ? ix * n[1] + iy : ix;
    }
    std::array<std::size_t, 2> unpack(std::size_t flat) const {
        if (dim == 2) return {flat / n[1], flat % n[1]};
        return {flat, 0};
    }
    std::array<double, 2> point(std::size_t flat) const {
        auto ij = unpack(flat);
        return {coord(0, ij[0]), dim == 2 ? coord(1, ij[1]) : 0.0};
    }

    /// Angular wavenumber of FFT mode j on axis a (standard order, j = n/2 is Nyquist).
    double wavenumber(int axis, std::size_t j) const {
        double f = (j <= n[axis] / 2) ? double(j) : double(j) - double(n[axis]);
        return 2.0 * pi * f / extent[axis];
    }

    /// Nearest grid-representable wavenumber to k (plane waves must live on the
    /// reciprocal lattice to be periodic).
    double nearest_mode(int axis, double k) const {
        return 2.0 * pi * std::round(k * extent[axis] / (2.0 * pi)) / extent[axis];
    }

    /// Wrap a coordinate into [-extent/2, extent/2).
    double wrap(int axis, double x) const {
        const double L = extent[axis];
        x = std::fmod(x + 0.5 * L, L);
        if (x < 0) x += L;
        return x - 0.5 * L;
    }
    /// Shortest signed displacement from a to b on the circle.
    double min_image(int axis, double a, double b) const {
        return wrap(axis, b - a);
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && extent == o.extent && hbar == o.hbar && mass == o.mass;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        for (int a = 0; a < dim; ++a) {
            if (n[a] < 4 || (n[a] & (n[a] - 1)) != 0)
                throw std::invalid_argument("grid: points per axis must be a power of two >= 4");
            if (!(extent[a] > 0)) throw std::invalid_argument("grid: extent must be positive");
        }
        if (!(hbar > 0) || !(mass > 0)) throw std::invalid_argument("grid: hbar and mass must be positive");
    }
};

}  // namespace clsim
