#include "clsim/field.hpp"

#include <algorithm>
#include <cmath>

namespace clsim {

double norm(const ScalarField& rho) {
    double s = 0.0;
    for (double x : rho.v) s += x;
    return s * rho.grid.cell_volume();
}

double norm(const ComplexField& psi) {
    double s = 0.0;
    for (const auto& z : psi.v) s += std::norm(z);
    return s * psi.grid.cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a, b, "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid.cell_volume();
}

ScalarField density(const ComplexField& psi) {
    ScalarField rho(psi.grid);
    for (std::size_t i = 0; i < psi.size(); ++i) rho[i] = std::norm(psi[i]);
    return rho;
}

double mean_coord(const ScalarField& rho, int axis) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double x = rho.grid.point(i)[axis];
        num += rho[i] * x;
        den += rho[i];
    }
    if (den == 0.0) throw Error("mean_coord: zero density");
    return num / den;
}

double coord_width(const ScalarField& rho, int axis) {
    const double mu = mean_coord(rho, axis);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double d = rho.grid.point(i)[axis] - mu;
        num += rho[i] * d * d;
        den += rho[i];
    }
    return std::sqrt(num / den);
}

double weighted_mean(const ScalarField& rho, const ScalarField& f) {
    check_same_grid(rho, f, "weighted_mean");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        num += rho[i] * f[i];
        den += rho[i];
    }
    if (den == 0.0) throw Error("weighted_mean: zero density");
    return num / den;
}

double default_rho_floor(const ScalarField& rho) {
    double m = 0.0;
    for (double x : rho.v) m = std::max(m, x);
    return 1e-12 * m;
}

double default_rho_floor(const ComplexField& psi) {
    double m = 0.0;
    for (const auto& z : psi.v) m = std::max(m, std::norm(z));
    return 1e-12 * m;
}

}  // namespace clsim
