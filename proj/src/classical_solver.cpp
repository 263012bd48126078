#include "clsim/classical_solver.hpp"

#include <algorithm>
#include <cmath>

#include "clsim/interp.hpp"
#include "clsim/spectral.hpp"

namespace clsim {

namespace {

struct LapScan {
    double value = 0.0;
    std::size_t location = 0;
};

LapScan scan_lap(const ActionField& S) {
    ScalarField lap = action_laplacian(S);
    LapScan scan;
    for (std::size_t i = 0; i < lap.size(); ++i) {
        const double a = std::abs(lap[i]);
        if (a > scan.value) {
            scan.value = a;
            scan.location = i;
        }
    }
    return scan;
}

}  // namespace

ClassicalStepper::ClassicalStepper(const Grid& grid, Potential potential, Params params)
    : grid_(grid), pot_(std::move(potential)), params_(params) {
    if (!(params_.dt > 0)) throw Error("classical stepper: dt must be positive");
    if (!(params_.caustic_threshold > 0)) throw Error("classical stepper: caustic threshold must be positive");
    if (params_.clamp_budget < 0) throw Error("classical stepper: clamp budget must be non-negative");
    Interpolator::validate_order(params_.interp_order);
    if (pot_.grid() != grid_) throw Error("classical stepper: potential grid mismatch");
}

ScalarField ClassicalStepper::hj_rhs(const ActionField& S, double t) const {
    // -((grad S)^2 / 2m + V); periodic whenever V is, so the slope part of S
    // never changes under the update
    ScalarField rhs(grid_);
    for (int a = 0; a < grid_.dim; ++a) {
        ScalarField g = action_gradient(S, a);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += g[i] * g[i];
    }
    const ScalarField& V = pot_.values_at(t);
    const double inv2m = 1.0 / (2.0 * grid_.mass);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -(rhs[i] * inv2m + V[i]);
    return rhs;
}

void ClassicalStepper::check_caustic(const ActionField& S, double t) const {
    const LapScan scan = scan_lap(S);
    if (scan.value * params_.dt / grid_.mass > params_.caustic_threshold)
        throw CausticError({t, scan.location, scan.value, params_.caustic_threshold});
}

CausticReport caustic_monitor(const ActionField& S, const ClassicalStepper& stepper, double t) {
    const LapScan scan = scan_lap(S);
    return {t, scan.location, scan.value, stepper.params().caustic_threshold};
}

ActionField ClassicalStepper::step_hj(const ActionField& S, double t, double dt_s) const {
    if (S.grid() != grid_) throw Error("step_hj: field grid mismatch");
    check_caustic(S, t);
    auto shifted = [&](const ScalarField& k, double c) {
        ActionField out = S;
        for (std::size_t i = 0; i < out.periodic.size(); ++i) out.periodic[i] += c * k[i];
        return out;
    };
    ScalarField k1 = hj_rhs(S, t);
    ScalarField k2 = hj_rhs(shifted(k1, 0.5 * dt_s), t + 0.5 * dt_s);
    ScalarField k3 = hj_rhs(shifted(k2, 0.5 * dt_s), t + 0.5 * dt_s);
    ScalarField k4 = hj_rhs(shifted(k3, dt_s), t + dt_s);
    ActionField out = S;
    const double w = dt_s / 6.0;
    for (std::size_t i = 0; i < out.periodic.size(); ++i)
        out.periodic[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check_caustic(out, t + dt_s);
    return out;
}

ScalarField ClassicalStepper::step_continuity(const ScalarField& R, const ActionField& S_mid) const {
    check_same_grid(R, S_mid.periodic, "step_continuity");
    if (R.grid != grid_) throw Error("step_continuity: field grid mismatch");
    const double dt = params_.dt;
    const double m = grid_.mass;
    const int dim = grid_.dim;

    std::array<ScalarField, 2> v;
    for (int a = 0; a < dim; ++a) {
        v[a] = action_gradient(S_mid, a);
        for (auto& val : v[a].v) val /= m;
    }
    ScalarField lapS = action_laplacian(S_mid);

    const int ord = params_.interp_order;
    Interpolator iR(R, ord);
    Interpolator iLap(lapS, ord);
    Interpolator iV0(v[0], ord);
    Interpolator iV1(dim == 2 ? v[1] : v[0], ord);

    ScalarField out(grid_);
    double clamped = 0.0, kept = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto x = grid_.point(i);
        // implicit midpoint characteristic, one fixed-point pass: probe with
        // the arrival-point velocity, re-evaluate at the half-way point
        const std::array<double, 2> v0{v[0][i], dim == 2 ? v[1][i] : 0.0};
        std::array<double, 2> xm{x[0] - 0.5 * dt * v0[0], x[1] - 0.5 * dt * v0[1]};
        const std::array<double, 2> vm{iV0(xm), dim == 2 ? iV1(xm) : 0.0};
        const std::array<double, 2> xd{x[0] - dt * vm[0], x[1] - dt * vm[1]};
        xm = {x[0] - 0.5 * dt * vm[0], x[1] - 0.5 * dt * vm[1]};
        double r = iR(xd) * std::exp(-iLap(xm) * dt / (2.0 * m));
        if (r < 0.0) {
            clamped += r * r;
            r = 0.0;
        }
        kept += r * r;
        out[i] = r;
    }
    if (kept <= 0.0) throw Error("step_continuity: transported amplitude vanished");
    const double rel = clamped / (kept + clamped);
    if (rel > params_.clamp_budget)
        throw Error("step_continuity: clamped " + std::to_string(rel) +
                    " of the mass in one step (budget " + std::to_string(params_.clamp_budget) +
                    "); grid under-resolves the amplitude");
    clamped_total_ += rel;
    return out;
}

void ClassicalStepper::step(PolarPair& state, double t) const {
    ActionField S_half = step_hj(state.S, t, 0.5 * params_.dt);
    state.R = step_continuity(state.R, S_half);
    state.S = step_hj(S_half, t + 0.5 * params_.dt, 0.5 * params_.dt);
}

RunRecord evolve_classical(PolarPair& state, const ClassicalStepper& stepper, double t0,
                           const EvolveOptions& opt, RunRecord* partial_on_caustic) {
    RunRecord rec;
    const Grid& g = stepper.grid();
    rec.log.columns = g.dim == 2
        ? std::vector<std::string>{"norm", "mean_x", "mean_y", "width_x", "width_y", "clamped"}
        : std::vector<std::string>{"norm", "mean_x", "width_x", "clamped"};
    rec.velocity.grid = g;
    const std::size_t obs_stride = opt.observe_stride ? opt.observe_stride : 1;
    const std::size_t frm_stride = opt.frame_stride ? opt.frame_stride : 1;

    auto density_of = [&]() {
        ScalarField rho(g);
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = state.R[i] * state.R[i];
        return rho;
    };
    const double norm0 = norm(density_of());
    if (norm0 <= 0) throw Error("evolve_classical: empty initial state");

    try {
        for (std::size_t s = 0; s <= opt.steps; ++s) {
            const double t = t0 + double(s) * stepper.dt();
            const bool last = s == opt.steps;
            if (s % obs_stride == 0 || last) {
                ScalarField rho = density_of();
                const double nrm = norm(rho);
                if (opt.norm_drift_abort > 0 && std::abs(nrm / norm0 - 1.0) > opt.norm_drift_abort)
                    throw NormDriftError("norm drift " + std::to_string(nrm / norm0 - 1.0) +
                                         " at t = " + std::to_string(t) +
                                         "; raise interp_order or refine the grid");
                std::vector<double> row{nrm};
                for (int a = 0; a < g.dim; ++a) row.push_back(mean_coord(rho, a));
                for (int a = 0; a < g.dim; ++a) row.push_back(coord_width(rho, a));
                row.push_back(stepper.clamped_mass_total());
                rec.log.add(t, std::move(row));
            }
            if (s % frm_stride == 0 || last) {
                rec.density.times.push_back(t);
                rec.density.rho.push_back(density_of());
                if (opt.capture_velocity) {
                    std::array<ScalarField, 2> comp;
                    for (int a = 0; a < g.dim; ++a) {
                        comp[a] = action_gradient(state.S, a);
                        for (auto& val : comp[a].v) val /= g.mass;
                    }
                    rec.velocity.times.push_back(t);
                    rec.velocity.comp.push_back(std::move(comp));
                    rec.velocity.mask.emplace_back(g.size(), true);
                }
            }
            if (opt.snapshot_stride && (s % opt.snapshot_stride == 0 || last))
                rec.snapshots.emplace_back(t, density_of());
            if (!last) stepper.step(state, t);
        }
    } catch (const CausticError&) {
        if (partial_on_caustic) *partial_on_caustic = std::move(rec);
        throw;
    }
    return rec;
}

namespace {

// C^q ramp from 0 at s<=0 to 1 at s>=1 whose derivative is flat across the
// middle: slope stays within 1/(1-e) of the linear interpolant instead of the
// ~3x concentration of a plain smoothstep. Used for the action blend between
// approaching supports, where the blend slope sets the gap's caustic time.
constexpr int kBlendOrder = 9;
constexpr double kRampEdge = 0.25;

double smoothstep_integral(double s, int q) {
    // int_0^s smoothstep_order; same binomial sum integrated term-wise
    if (s <= 0.0) return 0.0;
    if (s > 1.0) return smoothstep_integral(1.0, q) + (s - 1.0);
    double acc = 0.0;
    double c_qk_k = 1.0;
    double c_rest = 1.0;
    for (int j = 0; j < q; ++j) c_rest = c_rest * double(2 * q + 1 - j) / double(j + 1);
    double sk = 1.0;
    for (int k = 0; k <= q; ++k) {
        acc += (k % 2 == 0 ? 1.0 : -1.0) * c_qk_k * c_rest * sk / double(q + 2 + k);
        c_qk_k = c_qk_k * double(q + k + 1) / double(k + 1);
        c_rest = c_rest * double(q - k) / double(q + k + 2);
        sk *= s;
    }
    return std::pow(s, q + 2) * acc;
}

double flat_ramp(double s) {
    const double e = kRampEdge;
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double area;
    if (s <= e)
        area = e * smoothstep_integral(s / e, kBlendOrder);
    else if (s <= 1.0 - e)
        area = s - 0.5 * e;
    else
        area = (1.0 - e) - e * smoothstep_integral((1.0 - s) / e, kBlendOrder);
    return area / (1.0 - e);
}

struct Support {
    std::size_t state = 0;
    std::array<double, 2> lo{};  // bounding box, flat chart
    std::array<double, 2> hi{};
};

}  // namespace

PolarPair superpose_nonoverlapping(const std::vector<PolarPair>& states, double rho_floor) {
    if (states.empty()) throw Error("superpose: empty state list");
    if (states.size() == 1) return states.front();
    const Grid& g = states.front().R.grid;
    for (const auto& st : states) {
        if (st.R.grid != g || st.S.grid() != g)
            throw Error("superpose: states live on different grids");
    }
    const std::size_t n = g.size();
    const std::size_t K = states.size();

    double peak = 0.0;
    for (const auto& st : states)
        for (double r : st.R.v) peak = std::max(peak, r * r);
    const double floor = rho_floor >= 0 ? rho_floor : 1e-12 * peak;

    // support masks + pointwise disjointness
    std::vector<std::vector<std::uint8_t>> sup(K, std::vector<std::uint8_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        int owners = 0;
        for (std::size_t a = 0; a < K; ++a) {
            if (states[a].R[i] * states[a].R[i] > floor) {
                sup[a][i] = 1;
                ++owners;
            }
        }
        if (owners > 1) {
            const auto p = g.point(i);
            throw Error("superpose: supports overlap near x = " + std::to_string(p[0]) +
                        (g.dim == 2 ? ", y = " + std::to_string(p[1]) : ""));
        }
    }

    std::vector<Support> boxes(K);
    for (std::size_t a = 0; a < K; ++a) {
        boxes[a].state = a;
        bool any = false;
        for (int ax = 0; ax < g.dim; ++ax) {
            boxes[a].lo[ax] = g.extent[ax];
            boxes[a].hi[ax] = -g.extent[ax];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!sup[a][i]) continue;
            any = true;
            const auto p = g.point(i);
            for (int ax = 0; ax < g.dim; ++ax) {
                boxes[a].lo[ax] = std::min(boxes[a].lo[ax], p[ax]);
                boxes[a].hi[ax] = std::max(boxes[a].hi[ax], p[ax]);
            }
        }
        if (!any) throw Error("superpose: a member has no support above the floor");
        // flat-chart boxes require mass away from the periodic seam
        for (int ax = 0; ax < g.dim; ++ax) {
            bool at_lo = false, at_hi = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!sup[a][i]) continue;
                const auto ij = g.unpack(i);
                at_lo |= ij[ax] == 0;
                at_hi |= ij[ax] == g.n[ax] - 1;
            }
            if (at_lo && at_hi)
                throw Error("superpose: a support straddles the periodic seam");
        }
    }

    PolarPair out;
    out.R = ScalarField(g);
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t a = 0; a < K; ++a) r += states[a].R[i];
        out.R[i] = r;
    }

    // gradient fields of every member (global, smooth)
    std::vector<std::array<ScalarField, 2>> grad(K);
    for (std::size_t a = 0; a < K; ++a)
        for (int ax = 0; ax < g.dim; ++ax) grad[a][ax] = action_gradient(states[a].S, ax);

    if (g.dim == 1) {
        // walk the circle support-by-support; each inter-support gap carries a
        // flat ramp between the two neighbours' gradient fields, so opposing
        // slopes meet in the near-linear compression fan whose caustic time
        // matches the moment the supports actually touch
        const double L = g.extent[0];
        const double dx = g.spacing(0);
        const double margin = 4.0 * dx;
        std::vector<Support> order = boxes;
        std::sort(order.begin(), order.end(),
                  [](const Support& a, const Support& b) { return a.lo[0] < b.lo[0]; });
        ScalarField u(g);
        std::vector<std::uint8_t> assigned(n, 0);
        for (std::size_t a = 0; a < K; ++a)
            for (std::size_t i = 0; i < n; ++i)
                if (sup[a][i]) {
                    u[i] = grad[a][0][i];
                    assigned[i] = 1;
                }
        for (std::size_t k = 0; k < K; ++k) {
            const Support& cur = order[k];
            const Support& nxt = order[(k + 1) % K];
            double gap = nxt.lo[0] - cur.hi[0];
            if (k + 1 == K) gap += L;
            if (gap < 3.0 * margin)
                throw Error("superpose: support gap too narrow to blend the action across");
            const std::size_t i_start = std::size_t(std::lround((cur.hi[0] + 0.5 * L) / dx));
            const std::size_t gap_pts = std::size_t(std::lround(gap / dx));
            for (std::size_t j = 1; j < gap_pts; ++j) {
                const std::size_t i = (i_start + j) % g.n[0];
                if (assigned[i]) continue;
                const double d = double(j) * dx;  // distance past cur.hi
                const double s = (d - margin) / (gap - 2.0 * margin);
                const double w = flat_ramp(s);
                u[i] = (1.0 - w) * grad[cur.state][0][i] + w * grad[nxt.state][0][i];
                assigned[i] = 1;
            }
        }
        double mean = 0.0;
        for (double val : u.v) mean += val;
        mean /= double(n);
        out.S = ActionField(g, {mean, 0.0});
        out.S.periodic = antiderivative(u, 0);
        return out;
    }

    // 2D: windowed average of the members' gradients with a vacuum weight
    // that takes over away from every support, then a least-squares potential
    // (spectral Poisson solve). Exact on supports when the windows clear the
    // neighbours; the gap gauge is only approximately a gradient field.
    std::array<double, 2> margin{}, reach{};
    for (int ax = 0; ax < g.dim; ++ax) {
        margin[ax] = 4.0 * g.spacing(ax);
        reach[ax] = 0.15 * g.extent[ax];
    }
    auto window = [&](const Support& box, std::array<double, 2> x) {
        double w = 1.0;
        for (int ax = 0; ax < g.dim; ++ax) {
            const double c = 0.5 * (box.lo[ax] + box.hi[ax]);
            const double half = 0.5 * (box.hi[ax] - box.lo[ax]);
            const double d = std::max(0.0, std::abs(g.min_image(ax, c, x[ax])) - half);
            if (d <= margin[ax]) continue;
            w *= 1.0 - smoothstep_order((d - margin[ax]) / reach[ax], kBlendOrder);
        }
        return w;
    };
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = 0; b < K; ++b) {
            if (a == b) continue;
            for (std::size_t i = 0; i < n; ++i)
                if (sup[b][i] && window(boxes[a], g.point(i)) > 1e-14)
                    throw Error("superpose: blend window of one support reaches another; "
                                "increase the separation");
        }
    std::array<ScalarField, 2> u{ScalarField(g), ScalarField(g)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = g.point(i);
        double wsum = 0.0, wvac = 1.0;
        std::array<double, 2> acc{0.0, 0.0};
        for (std::size_t a = 0; a < K; ++a) {
            const double w = window(boxes[a], x);
            wsum += w;
            wvac *= 1.0 - w;
            for (int ax = 0; ax < g.dim; ++ax) acc[ax] += w * grad[a][ax][i];
        }
        const double denom = wsum + wvac;
        for (int ax = 0; ax < g.dim; ++ax) u[ax][i] = acc[ax] / denom;
    }
    std::array<double, 2> slope{0.0, 0.0};
    for (int ax = 0; ax < g.dim; ++ax) {
        for (double val : u[ax].v) slope[ax] += val;
        slope[ax] /= double(n);
    }
    // S = -laplacian^{-1} div(u - slope)
    std::vector<cplx> div(n, cplx{});
    for (int ax = 0; ax < g.dim; ++ax) {
        std::vector<cplx> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = u[ax][i] - slope[ax];
        fft_forward(g, c);
        for (std::size_t j0 = 0; j0 < g.n[0]; ++j0)
            for (std::size_t j1 = 0; j1 < g.n[1]; ++j1) {
                const std::size_t i = j0 * g.n[1] + j1;
                const double k = g.wavenumber(ax, ax == 0 ? j0 : j1);
                div[i] += cplx(0.0, k) * c[i];
            }
    }
    for (std::size_t j0 = 0; j0 < g.n[0]; ++j0)
        for (std::size_t j1 = 0; j1 < g.n[1]; ++j1) {
            const std::size_t i = j0 * g.n[1] + j1;
            const double k0 = g.wavenumber(0, j0);
            const double k1 = g.wavenumber(1, j1);
            const double k2 = k0 * k0 + k1 * k1;
            div[i] = k2 > 0 ? -div[i] / k2 : cplx{};
        }
    fft_backward(g, div);
    out.S = ActionField(g, slope);
    for (std::size_t i = 0; i < n; ++i) out.S.periodic[i] = div[i].real();
    return out;
}

}  // namespace clsim
