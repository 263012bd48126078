#include "clsim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace clsim {

DensitySampler::DensitySampler(const ScalarField& rho) : rho_(rho) {
    for (double v : rho.v) {
        if (v < 0) throw SamplingError("density sampler: negative density");
        if (!std::isfinite(v)) throw SamplingError("density sampler: non-finite density");
        max_ = std::max(max_, v);
        total_ += v;
    }
    if (total_ <= 0) throw SamplingError("density sampler: no mass");
    if (rho.grid.dim == 1) {
        cdf_.resize(rho.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            acc += rho[i];
            cdf_[i] = acc;
        }
    }
}

std::array<double, 2> DensitySampler::operator()(SplitStream& rng) const {
    const Grid& g = rho_.grid;
    if (g.dim == 1) {
        // invert the cell-mass CDF; uniform within the chosen cell (cells are
        // centered on grid points, matching the trapezoid-free quadrature)
        const double u = rng.next_double() * total_;
        const std::size_t i = std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
        const std::size_t cell = std::min(i, g.n[0] - 1);
        const double x = g.coord(0, cell) + (rng.next_double() - 0.5) * g.spacing(0);
        return {g.wrap(0, x), 0.0};
    }
    // 2D rejection against the sampled maximum, bilinear within cells
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double x = (rng.next_double() - 0.5) * g.extent[0];
        const double y = (rng.next_double() - 0.5) * g.extent[1];
        // nearest-cell value; the proposal stays conservative because the
        // acceptance test uses the exact cell value against the global max
        const std::size_t i0 = std::size_t(std::lround((x + 0.5 * g.extent[0]) / g.spacing(0))) % g.n[0];
        const std::size_t i1 = std::size_t(std::lround((y + 0.5 * g.extent[1]) / g.spacing(1))) % g.n[1];
        const double val = rho_[g.index(i0, i1)];
        if (rng.next_double() * max_ <= val) return {x, y};
    }
    throw SamplingError("density sampler: rejection failed to accept (pathological density)");
}

std::array<double, 2> sample_density(const ScalarField& rho, SplitStream& rng) {
    return DensitySampler(rho)(rng);
}

}  // namespace clsim
