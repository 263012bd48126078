#include "clsim/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "clsim/interp.hpp"
#include "clsim/polar.hpp"

namespace clsim {

PositiveBasis::PositiveBasis(std::vector<ScalarField> members, double overlap_tol)
    : members_(std::move(members)) {
    if (members_.empty()) throw Error("positive basis: no members");
    if (members_.size() > 64) throw Error("positive basis: more than 64 members");
    const Grid& g = members_.front().grid;
    for (const auto& m : members_) {
        if (m.grid != g) throw Error("positive basis: members live on different grids");
        for (double v : m.v)
            if (v < 0) throw Error("positive basis: members must be non-negative");
        ScalarField rho(g);
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = m[i] * m[i];
        if (std::abs(norm(rho) - 1.0) > 1e-6)
            throw Error("positive basis: members must be unit-normalized");
    }
    for (std::size_t a = 0; a < members_.size(); ++a)
        for (std::size_t b = a + 1; b < members_.size(); ++b)
            for (std::size_t i = 0; i < members_[a].size(); ++i)
                if (std::abs(members_[a][i] * members_[b][i]) > overlap_tol)
                    throw Error("positive basis: members " + std::to_string(a) + " and " +
                                std::to_string(b) + " overlap");
}

PositiveBasis PositiveBasis::bumps(const Grid& g, std::size_t n) {
    if (g.dim != 1) throw Error("positive basis bumps: 1D grids only");
    if (n == 0) throw Error("positive basis bumps: n must be positive");
    const double slot = g.extent[0] / double(n);
    const double half = 0.45 * slot;  // 10% of each slot stays exactly zero
    std::vector<ScalarField> members;
    members.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c = -0.5 * g.extent[0] + (double(j) + 0.5) * slot;
        ScalarField R(g);
        for (std::size_t i = 0; i < g.n[0]; ++i) {
            const double s = std::abs(g.min_image(0, c, g.coord(0, i))) / half;
            R[i] = s < 1.0 ? smoothstep3(1.0 - s) : 0.0;
        }
        double mass = 0.0;
        for (double v : R.v) mass += v * v;
        mass *= g.cell_volume();
        if (mass <= 0) throw Error("positive basis bumps: bump narrower than the grid spacing");
        const double scale = 1.0 / std::sqrt(mass);
        for (auto& v : R.v) v *= scale;
        members.push_back(std::move(R));
    }
    return PositiveBasis(std::move(members));
}

double DensityMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < size; ++i) t += at(i, i);
    return t;
}

namespace {

void check_weights(const std::vector<double>& w) {
    if (w.empty()) throw Error("density matrix: empty weight vector");
    if (w.size() > 64) throw Error("density matrix: more than 64 weights");
    double total = 0.0;
    for (double v : w) {
        if (v < 0) throw Error("density matrix: negative weight");
        total += v;
    }
    if (total <= 0) throw Error("density matrix: weights sum to zero");
}

}  // namespace

DensityMatrix pure_density(const std::vector<double>& weights) {
    check_weights(weights);
    DensityMatrix dm;
    dm.size = weights.size();
    dm.m.assign(dm.size * dm.size, 0.0);
    for (std::size_t i = 0; i < dm.size; ++i)
        for (std::size_t j = 0; j < dm.size; ++j)
            dm.at(i, j) = std::sqrt(weights[i] * weights[j]);
    return dm;
}

DensityMatrix mixed_density(const std::vector<double>& weights) {
    check_weights(weights);
    DensityMatrix dm;
    dm.size = weights.size();
    dm.m.assign(dm.size * dm.size, 0.0);
    for (std::size_t i = 0; i < dm.size; ++i) dm.at(i, i) = weights[i];
    return dm;
}

DensityMatrix observable_matrix(const PositiveBasis& basis, const ScalarField& A) {
    check_same_grid(A, basis.member(0), "observable_matrix");
    DensityMatrix out;
    out.size = basis.size();
    out.m.assign(out.size * out.size, 0.0);
    const double dv = A.grid.cell_volume();
    for (std::size_t i = 0; i < out.size; ++i)
        for (std::size_t j = i; j < out.size; ++j) {
            double acc = 0.0;
            const auto& Ri = basis.member(i);
            const auto& Rj = basis.member(j);
            for (std::size_t k = 0; k < A.size(); ++k) acc += Ri[k] * A[k] * Rj[k];
            out.at(i, j) = out.at(j, i) = acc * dv;
        }
    return out;
}

double expect_diagonal(const DensityMatrix& rho, const PositiveBasis& basis,
                       const ScalarField& A) {
    if (rho.size != basis.size()) throw Error("expect_diagonal: matrix/basis size mismatch");
    const DensityMatrix Am = observable_matrix(basis, A);
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size; ++i)
        for (std::size_t j = 0; j < rho.size; ++j) acc += rho.at(i, j) * Am.at(i, j);
    return acc;
}

std::vector<double> symmetric_eigenvalues(const DensityMatrix& m) {
    const std::size_t n = m.size;
    if (n == 0) throw Error("symmetric_eigenvalues: empty matrix");
    std::vector<double> a = m.m;
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    // cyclic Jacobi sweeps; n <= 64 so convergence is fast and exact enough
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

ExchangeReport exchange_density(const ScalarField& R1, const ScalarField& R2, double tol) {
    check_same_grid(R1, R2, "exchange_density");
    double max_prod = 0.0;
    double overlap = 0.0;
    for (std::size_t i = 0; i < R1.size(); ++i) {
        const double p = R1[i] * R2[i];
        max_prod = std::max(max_prod, std::abs(p));
        overlap += p;
    }
    if (max_prod > tol)
        throw Error("exchange_density: amplitudes overlap pointwise (max product " +
                    std::to_string(max_prod) + "); the classical two-particle reading "
                    "requires disjoint supports");
    overlap *= R1.grid.cell_volume();

    ScalarField rho1(R1.grid), rho2(R2.grid);
    for (std::size_t i = 0; i < R1.size(); ++i) {
        rho1[i] = R1[i] * R1[i];
        rho2[i] = R2[i] * R2[i];
    }
    ExchangeReport rep;
    rep.overlap = overlap;
    rep.exchange_weight = 2.0 * overlap * overlap;
    rep.direct_weight = 2.0 * norm(rho1) * norm(rho2);
    return rep;
}

double EhrenfestResiduals::max_r1() const {
    double m = 0.0;
    for (double v : r1) m = std::max(m, v);
    return m;
}

double EhrenfestResiduals::max_r2() const {
    double m = 0.0;
    for (double v : r2) m = std::max(m, v);
    return m;
}

EhrenfestResiduals ehrenfest_residuals(const DensityFrames& density, const VelocityFrames& velocity,
                                       const Potential& pot) {
    const std::size_t K = density.count();
    if (K < 3) throw Error("ehrenfest: need at least three frames");
    if (velocity.count() != K) throw Error("ehrenfest: density/velocity frame counts differ");
    const Grid& g = density.rho.front().grid;
    if (pot.grid() != g) throw Error("ehrenfest: potential grid mismatch");
    const double h = density.times[1] - density.times[0];
    for (std::size_t k = 0; k + 1 < K; ++k) {
        if (std::abs((density.times[k + 1] - density.times[k]) - h) > 1e-9 * std::abs(h))
            throw Error("ehrenfest: frames not uniformly spaced");
        if (std::abs(density.times[k] - velocity.times[k]) > 1e-12)
            throw Error("ehrenfest: density and velocity frames sampled at different times");
    }

    // per-frame moments
    std::vector<std::array<double, 2>> mean_x(K), mean_v(K), mean_f(K);
    for (std::size_t k = 0; k < K; ++k) {
        const ScalarField& rho = density.rho[k];
        for (int a = 0; a < g.dim; ++a) {
            mean_x[k][a] = mean_coord(rho, a);
            mean_v[k][a] = weighted_mean(rho, velocity.comp[k][a]);
            ScalarField force = pot.grad_at(density.times[k], a);
            for (auto& v : force.v) v = -v;
            mean_f[k][a] = weighted_mean(rho, force);
        }
    }

    EhrenfestResiduals out;
    for (std::size_t k = 1; k + 1 < K; ++k) {
        double r1 = 0.0, r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const double dxdt = (mean_x[k + 1][a] - mean_x[k - 1][a]) / (2.0 * h);
            const double d2x = (mean_x[k + 1][a] - 2.0 * mean_x[k][a] + mean_x[k - 1][a]) / (h * h);
            r1 = std::max(r1, std::abs(dxdt - mean_v[k][a]));
            r2 = std::max(r2, std::abs(g.mass * d2x - mean_f[k][a]));
        }
        out.times.push_back(density.times[k]);
        out.r1.push_back(r1);
        out.r2.push_back(r2);
    }
    return out;
}

PhaseSpaceEnsemble phase_space_from_pure(const PolarPair& state, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("phase_space_from_pure: n must be positive");
    const Grid& g = state.R.grid;
    ScalarField rho(g);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = state.R[i] * state.R[i];
    DensitySampler sampler(rho);

    std::array<ScalarField, 2> grad;
    for (int a = 0; a < g.dim; ++a) grad[a] = action_gradient(state.S, a);

    PhaseSpaceEnsemble ens;
    ens.grid = g;
    ens.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitStream rng(seed, i);
        PhaseSpacePoint pt;
        pt.x = sampler(rng);
        for (int a = 0; a < g.dim; ++a) pt.p[a] = interp_at(grad[a], pt.x, 3);
        pt.weight = 1.0 / double(n);
        ens.points[i] = pt;
    }
    return ens;
}

PhaseSpaceEnsemble phase_space_from_R(const ScalarField& R, double p_box, std::size_t n,
                                      std::uint64_t seed) {
    if (n == 0) throw Error("phase_space_from_R: n must be positive");
    if (!(p_box >= 0)) throw Error("phase_space_from_R: p_box must be non-negative");
    const Grid& g = R.grid;
    ScalarField rho(g);
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = R[i] * R[i];
    DensitySampler sampler(rho);

    PhaseSpaceEnsemble ens;
    ens.grid = g;
    ens.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitStream rng(seed, i);
        PhaseSpacePoint pt;
        pt.x = sampler(rng);
        for (int a = 0; a < g.dim; ++a) pt.p[a] = (2.0 * rng.next_double() - 1.0) * p_box;
        pt.weight = 1.0 / double(n);
        ens.points[i] = pt;
    }
    return ens;
}

double phase_space_average(const PhaseSpaceEnsemble& ens,
                           const std::function<double(std::array<double, 2>, std::array<double, 2>)>& O) {
    if (ens.points.empty()) throw Error("phase_space_average: empty ensemble");
    double acc = 0.0, wsum = 0.0;
    for (const auto& pt : ens.points) {
        acc += pt.weight * O(pt.x, pt.p);
        wsum += pt.weight;
    }
    if (wsum <= 0) throw Error("phase_space_average: zero total weight");
    return acc / wsum;
}

void evolve_phase_space(PhaseSpaceEnsemble& ens, const Potential& pot, double t0, double t1,
                        double dt) {
    if (!(dt > 0)) throw Error("evolve_phase_space: dt must be positive");
    if (t1 < t0) throw Error("evolve_phase_space: t1 < t0");
    const Grid& g = ens.grid;
    const double m = g.mass;

    for (auto& pt : ens.points) {
        double t = t0;
        std::array<double, 2> x = pt.x, p = pt.p;
        while (t < t1 - 1e-12 * std::max(1.0, std::abs(t1))) {
            const double h = std::min(dt, t1 - t);
            auto acc = [&](std::array<double, 2> xx, double tt) {
                const auto gr = pot.grad(xx, tt);
                return std::array<double, 2>{-gr[0], -gr[1]};
            };
            const auto a1 = acc(x, t);
            const std::array<double, 2> x2{x[0] + 0.5 * h * p[0] / m, x[1] + 0.5 * h * p[1] / m};
            const std::array<double, 2> p2{p[0] + 0.5 * h * a1[0], p[1] + 0.5 * h * a1[1]};
            const auto a2 = acc(x2, t + 0.5 * h);
            const std::array<double, 2> x3{x[0] + 0.5 * h * p2[0] / m, x[1] + 0.5 * h * p2[1] / m};
            const std::array<double, 2> p3{p[0] + 0.5 * h * a2[0], p[1] + 0.5 * h * a2[1]};
            const auto a3 = acc(x3, t + 0.5 * h);
            const std::array<double, 2> x4{x[0] + h * p3[0] / m, x[1] + h * p3[1] / m};
            const std::array<double, 2> p4{p[0] + h * a3[0], p[1] + h * a3[1]};
            const auto a4 = acc(x4, t + h);
            for (int a = 0; a < 2; ++a) {
                x[a] += h / 6.0 * (p[a] + 2.0 * p2[a] + 2.0 * p3[a] + p4[a]) / m;
                p[a] += h / 6.0 * (a1[a] + 2.0 * a2[a] + 2.0 * a3[a] + a4[a]);
            }
            for (int a = 0; a < g.dim; ++a) x[a] = g.wrap(a, x[a]);
            t += h;
        }
        pt.x = x;
        pt.p = p;
    }
}

double phase_space_position_l1(const PhaseSpaceEnsemble& ens, const ScalarField& rho,
                               std::size_t bins) {
    const Grid& g = rho.grid;
    if (g.dim != 1) throw Error("phase_space_position_l1: 1D densities only");
    if (bins == 0 || g.n[0] % bins != 0)
        throw Error("phase_space_position_l1: bins must evenly divide the grid");
    if (ens.points.empty()) throw Error("phase_space_position_l1: empty ensemble");

    std::vector<double> h(bins, 0.0);
    const double binw = g.extent[0] / double(bins);
    double wsum = 0.0;
    for (const auto& pt : ens.points) {
        auto b = std::size_t((g.wrap(0, pt.x[0]) + 0.5 * g.extent[0]) / binw);
        if (b >= bins) b = bins - 1;
        h[b] += pt.weight;
        wsum += pt.weight;
    }
    if (wsum <= 0) throw Error("phase_space_position_l1: zero total weight");
    for (auto& v : h) v /= wsum;

    std::vector<double> q(bins, 0.0);
    const std::size_t per = g.n[0] / bins;
    double total = 0.0;
    for (std::size_t i = 0; i < g.n[0]; ++i) {
        q[i / per] += rho[i];
        total += rho[i];
    }
    if (total <= 0) throw Error("phase_space_position_l1: zero density");
    double l1 = 0.0;
    for (std::size_t b = 0; b < bins; ++b) l1 += std::abs(h[b] - q[b] / total);
    return l1;
}

}  // namespace clsim
