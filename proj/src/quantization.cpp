#include "clsim/quantization.hpp"

#include <cmath>

namespace clsim {

LoopPath LoopPath::axis_loop(const Grid& g) {
    if (g.dim != 1) throw Error("axis_loop: 1D grids only");
    LoopPath loop;
    loop.grid = g;
    loop.indices.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) loop.indices[i] = i;
    return loop;
}

LoopPath LoopPath::rectangle(const Grid& g, std::size_t i0, std::size_t i1, std::size_t j0,
                             std::size_t j1) {
    if (g.dim != 2) throw Error("rectangle: 2D grids only");
    if (i0 >= i1 || j0 >= j1) throw Error("rectangle: degenerate index bounds");
    if (i1 >= g.n[0] || j1 >= g.n[1]) throw Error("rectangle: bounds outside the grid");
    LoopPath loop;
    loop.grid = g;
    // counter-clockwise perimeter; every edge drops its final corner so the
    // loop visits each site exactly once
    for (std::size_t i = i0; i < i1; ++i) loop.indices.push_back(g.index(i, j0));
    for (std::size_t j = j0; j < j1; ++j) loop.indices.push_back(g.index(i1, j));
    for (std::size_t i = i1; i > i0; --i) loop.indices.push_back(g.index(i, j1));
    for (std::size_t j = j1; j > j0; --j) loop.indices.push_back(g.index(i0, j));
    loop.validate();
    return loop;
}

void LoopPath::validate() const {
    if (indices.size() < 3) throw Error("loop needs at least 3 sites");
    auto adjacent = [this](std::size_t a, std::size_t b) {
        const auto ia = grid.unpack(a);
        const auto ib = grid.unpack(b);
        int moved = 0;
        for (int ax = 0; ax < grid.dim; ++ax) {
            const long n = long(grid.n[ax]);
            long d = std::labs(long(ia[ax]) - long(ib[ax]));
            d = std::min(d, n - d);  // periodic neighbours count
            if (d > 1) return false;
            moved += int(d);
        }
        return moved == 1;
    };
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= grid.size()) throw Error("loop index outside the grid");
        const std::size_t next = indices[(k + 1) % indices.size()];
        if (!adjacent(indices[k], next))
            throw Error("loop sites " + std::to_string(k) + " and " + std::to_string(k + 1) +
                        " are not grid neighbours");
    }
}

WindingResult winding_number(const ScalarField& S, const LoopPath& loop) {
    if (S.grid != loop.grid) throw Error("winding_number: loop grid differs from the field grid");
    loop.validate();
    const double two_pi_h = 2.0 * pi * S.grid.hbar;
    const std::size_t count = loop.indices.size();

    // Per-segment momentum integrals p . dl, reconstructed from the sampled
    // single-valued S. Raw differences telescope to zero around any closed
    // loop, so the winding lives entirely in the branch-cut jumps; reducing
    // each step mod 2 pi hbar recovers p . dl at steps that cross an
    // integer-winding cut but aliases fractional cuts (a 5 pi hbar jump is
    // not a multiple of 2 pi hbar). Steps are trusted only while the reduced
    // value is small; the rest are marked as cuts.
    std::vector<double> step(count);
    std::vector<bool> cut(count, false);
    const double trust = pi * S.grid.hbar / 4.0;  // loops must resolve |p . dl| below this
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t next = loop.indices[(k + 1) % count];
        double d = S[next] - S[loop.indices[k]];
        d -= two_pi_h * std::round(d / two_pi_h);
        step[k] = d;
        cut[k] = std::abs(d) > trust;
    }

    // Across a cut the physical p . dl continues smoothly even though the
    // stored S jumps, so replace each cut step by the average of the nearest
    // trusted neighbours on both sides.
    double total = 0.0;
    bool all_cut = true;
    for (std::size_t k = 0; k < count; ++k) all_cut = all_cut && cut[k];
    if (all_cut) throw Error("winding_number: loop does not resolve the action; refine it");
    for (std::size_t k = 0; k < count; ++k) {
        if (!cut[k]) {
            total += step[k];
            continue;
        }
        std::size_t back = k, fwd = k;
        while (cut[back]) back = (back + count - 1) % count;
        while (cut[fwd]) fwd = (fwd + 1) % count;
        total += 0.5 * (step[back] + step[fwd]);
    }

    WindingResult w;
    w.total = total;
    w.n = std::lround(total / two_pi_h);
    w.residual = std::abs(total / two_pi_h - double(w.n));
    return w;
}

BohrCheck bohr_check(const ScalarField& S, const LoopPath& loop, double tol) {
    BohrCheck c;
    c.winding = winding_number(S, loop);
    c.quantized = c.winding.residual < tol;
    return c;
}

std::vector<CoulombLevel> coulomb_circular_spectrum(double k, double m, double hbar, int n_max) {
    if (k <= 0 || m <= 0 || hbar <= 0) throw Error("coulomb_circular_spectrum: k, m, hbar must be positive");
    if (n_max < 1) throw Error("coulomb_circular_spectrum: n_max must be at least 1");
    std::vector<CoulombLevel> levels;
    levels.reserve(std::size_t(n_max));
    for (int n = 1; n <= n_max; ++n) {
        CoulombLevel lvl;
        lvl.n = n;
        lvl.r = double(n) * double(n) * hbar * hbar / (m * k);
        lvl.E = -m * k * k / (2.0 * hbar * hbar * double(n) * double(n));
        const double grad = double(n) * hbar / lvl.r;
        lvl.hj_residual = std::abs(grad * grad / (2.0 * m) - k / lvl.r - lvl.E);
        levels.push_back(lvl);
    }
    return levels;
}

}  // namespace clsim
