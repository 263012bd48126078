#include "clsim/interp.hpp"

#include <cmath>

namespace clsim {

namespace {

// Lagrange weights for the npts-point stencil at fractional offset theta from
// the stencil's anchor node. Nodes sit at integer offsets -(npts/2-1) .. npts/2
// relative to the cell's left node; theta in [0,1) is measured from that node.
void lagrange_weights(int npts, double theta, double* w) {
    // node positions relative to the left cell node
    // npts=2: {0,1}; npts=4: {-1,0,1,2}; npts=6: {-2..3}; npts=8: {-3..4}
    const int lo = -(npts / 2 - 1);
    for (int i = 0; i < npts; ++i) {
        double num = 1.0, den = 1.0;
        const double xi = lo + i;
        for (int j = 0; j < npts; ++j) {
            if (j == i) continue;
            const double xj = lo + j;
            num *= theta - xj;
            den *= xi - xj;
        }
        w[i] = num / den;
    }
}

}  // namespace

void Interpolator::validate_order(int order) {
    if (order != 1 && order != 3 && order != 5 && order != 7)
        throw Error("interp: order must be 1, 3, 5 or 7");
}

Interpolator::Interpolator(const ScalarField& f, int order) : f_(f), order_(order) {
    validate_order(order);
}

double Interpolator::operator()(std::array<double, 2> x) const {
    const Grid& g = f_.grid;
    const int npts = order_ + 1;
    const int lo = -(npts / 2 - 1);

    double wx[8], wy[8];
    long ix0, iy0 = 0;
    {
        const double s = (g.wrap(0, x[0]) + 0.5 * g.extent[0]) / g.spacing(0);
        const double fl = std::floor(s);
        ix0 = long(fl);
        lagrange_weights(npts, s - fl, wx);
    }
    if (g.dim == 2) {
        const double s = (g.wrap(1, x[1]) + 0.5 * g.extent[1]) / g.spacing(1);
        const double fl = std::floor(s);
        iy0 = long(fl);
        lagrange_weights(npts, s - fl, wy);
    }

    const long n0 = long(g.n[0]);
    if (g.dim == 1) {
        double acc = 0.0;
        for (int i = 0; i < npts; ++i) {
            long idx = (ix0 + lo + i) % n0;
            if (idx < 0) idx += n0;
            acc += wx[i] * f_[std::size_t(idx)];
        }
        return acc;
    }
    const long n1 = long(g.n[1]);
    double acc = 0.0;
    for (int i = 0; i < npts; ++i) {
        long ix = (ix0 + lo + i) % n0;
        if (ix < 0) ix += n0;
        double row = 0.0;
        for (int j = 0; j < npts; ++j) {
            long iy = (iy0 + lo + j) % n1;
            if (iy < 0) iy += n1;
            row += wy[j] * f_[std::size_t(ix) * g.n[1] + std::size_t(iy)];
        }
        acc += wx[i] * row;
    }
    return acc;
}

double interp_at(const ScalarField& f, std::array<double, 2> x, int order) {
    return Interpolator(f, order)(x);
}

}  // namespace clsim
