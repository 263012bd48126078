#include "clsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <thread>

#include "clsim/classical_solver.hpp"
#include "clsim/ensembles.hpp"
#include "clsim/interp.hpp"
#include "clsim/io.hpp"
#include "clsim/linear_solver.hpp"
#include "clsim/quantization.hpp"
#include "clsim/rng.hpp"
#include "clsim/trajectories.hpp"

namespace clsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    ScenarioConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.set(section.empty() ? key : section + "." + key, value);
    }
    return cfg;
}

void ScenarioConfig::merge_overrides(const std::map<std::string, std::string>& overrides) {
    for (const auto& [k, v] : overrides) values_[k] = v;
}

std::string ScenarioConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ScenarioConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t idx = 0;
        const double v = std::stod(it->second, &idx);
        if (idx != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: '" + it->second + "'");
    }
}

long ScenarioConfig::get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t idx = 0;
        const long v = std::stol(it->second, &idx);
        if (idx != it->second.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not an integer: '" + it->second + "'");
    }
}

std::string version_string() { return "clsim 0.1.0"; }

namespace {

using Metrics = std::vector<std::pair<std::string, double>>;
namespace fs = std::filesystem;

/// Reads config values with the scenario's declared defaults as fallback, so
/// the defaults map is the single source of truth for what a key means.
struct Keyed {
    const ScenarioConfig& cfg;
    const std::map<std::string, std::string>& defaults;

    double num(const std::string& k) const { return cfg.get_double(k, std::stod(defaults.at(k))); }
    long count(const std::string& k) const { return cfg.get_long(k, std::stol(defaults.at(k))); }
};

int auto_threads(long requested) {
    if (requested > 0) return int(requested);
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(std::min(hc, 8u)) : 1;
}

Grid grid_1d(const Keyed& k) {
    return Grid(std::size_t(k.count("grid.n")), k.num("grid.extent"), k.num("grid.hbar"),
                k.num("grid.mass"));
}

/// Product Gaussian amplitude, unit L2 norm. cut_sigmas > 0 multiplies in a
/// high-order window per axis so the support is exactly zero beyond
/// (cut_sigmas + 1) * sigma; the band of width sigma keeps the edge smooth
/// enough for spectral derivatives of anything built on top.
ScalarField gaussian_amplitude(const Grid& g, std::array<double, 2> center,
                               std::array<double, 2> sigma, double cut_sigmas = 0.0) {
    ScalarField R(g);
    for (std::size_t i = 0; i < R.size(); ++i) {
        const auto p = g.point(i);
        double val = 1.0;
        for (int a = 0; a < g.dim; ++a) {
            const double d = g.min_image(a, center[a], p[a]);
            val *= std::pow(2.0 * pi * sigma[a] * sigma[a], -0.25) *
                   std::exp(-d * d / (4.0 * sigma[a] * sigma[a]));
            if (cut_sigmas > 0.0)
                val *= 1.0 - smoothstep_order((std::abs(d) - cut_sigmas * sigma[a]) / sigma[a], 9);
        }
        R[i] = val;
    }
    double mass = 0.0;
    for (double r : R.v) mass += r * r;
    mass *= g.cell_volume();
    const double scale = 1.0 / std::sqrt(mass);
    for (double& r : R.v) r *= scale;
    return R;
}

double snap_momentum(const Grid& g, double p) {
    return g.nearest_mode(0, p / g.hbar) * g.hbar;
}

/// Fringe contrast from interior extrema within |x| <= halfwidth: the highest
/// local maximum against the lowest local minimum. A fringeless hump has no
/// interior minimum and scores exactly zero; tiny numerical ripples are kept
/// out by the prominence floor.
double fringe_visibility(const ScalarField& rho, double halfwidth) {
    const Grid& g = rho.grid;
    double peak = 0.0;
    for (double v : rho.v) peak = std::max(peak, v);
    const double eps = 1e-12 * peak;
    double best_max = -1.0, best_min = -1.0;
    for (std::size_t i = 1; i + 1 < rho.size(); ++i) {
        if (std::abs(g.coord(0, i)) > halfwidth) continue;
        const double v = rho[i];
        if (v > rho[i - 1] + eps && v > rho[i + 1] + eps)
            best_max = std::max(best_max, v);
        if (v < rho[i - 1] - eps && v < rho[i + 1] - eps)
            best_min = best_min < 0 ? v : std::min(best_min, v);
    }
    if (best_max < 0 || best_min < 0) return 0.0;
    return (best_max - best_min) / (best_max + best_min);
}

/// Exact free evolution of a Gaussian packet with momentum p (infinite-domain
/// closed form; valid on the periodic grid while the tails stay far from the
/// seam). t = 0 reproduces the initial packet, so numeric initial data built
/// from this stays consistent with the oracle at later times.
cplx free_packet(const Grid& g, double c, double sigma0, double p, double x, double t) {
    const double h = g.hbar, m = g.mass;
    const cplx z(1.0, h * t / (2.0 * m * sigma0 * sigma0));
    const double d = (x - p * t / m) - c;
    const cplx envelope = std::exp(-d * d / (4.0 * sigma0 * sigma0 * z));
    const cplx phase = std::exp(cplx(0.0, (p * x - p * p * t / (2.0 * m)) / h));
    return std::pow(2.0 * pi * sigma0 * sigma0, -0.25) / std::sqrt(z) * envelope * phase;
}

DensityFrames slice_frames(const DensityFrames& f, double t_max) {
    DensityFrames out;
    for (std::size_t k = 0; k < f.count(); ++k) {
        if (f.times[k] > t_max + 1e-12) break;
        out.times.push_back(f.times[k]);
        out.rho.push_back(f.rho[k]);
    }
    return out;
}

DensityFrames half_density(const DensityFrames& f) {
    DensityFrames out;
    for (std::size_t k = 0; k < f.count(); k += 2) {
        out.times.push_back(f.times[k]);
        out.rho.push_back(f.rho[k]);
    }
    return out;
}

VelocityFrames half_velocity(const VelocityFrames& f) {
    VelocityFrames out;
    out.grid = f.grid;
    out.any_masked = f.any_masked;
    for (std::size_t k = 0; k < f.count(); k += 2) {
        out.times.push_back(f.times[k]);
        out.comp.push_back(f.comp[k]);
        out.mask.push_back(f.mask[k]);
    }
    return out;
}

void write_snapshot(const fs::path& out_dir, const std::string& name, const ScalarField& f) {
    write_field_csv(out_dir / "snapshots" / (name + ".csv"), f);
}

// ---------------------------------------------------------------------------
// free-dispersion

const std::map<std::string, std::string>& free_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "1024"},      {"grid.extent", "40"},  {"grid.hbar", "1"},
        {"grid.mass", "1"},      {"packet.width", "0.5"}, {"packet.center", "0"},
        {"packet.momentum", "0"}, {"run.t_end", "0"},      {"run.dt", "2.5e-4"},
    };
    return d;
}

Metrics sc_free_dispersion(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, free_defaults()};
    const Grid g = grid_1d(k);
    const double l0 = k.num("packet.width");
    const double x0 = k.num("packet.center");
    const double p = snap_momentum(g, k.num("packet.momentum"));
    double t_end = k.num("run.t_end");
    if (t_end <= 0) t_end = 2.0 * g.mass * l0 * l0 / g.hbar;  // width grows by sqrt(2) here
    const std::size_t steps = std::max<std::size_t>(2, std::size_t(std::lround(t_end / k.num("run.dt"))));
    const double dt = t_end / double(steps);

    const ScalarField R = gaussian_amplitude(g, {x0, 0}, {l0, l0});
    const Potential V = Potential::zero(g);

    EvolveOptions opt;
    opt.steps = steps;
    opt.observe_stride = std::max<std::size_t>(1, steps / 100);
    opt.frame_stride = steps;  // initial and final frames only
    opt.capture_velocity = false;

    ComplexField psi = compose(PolarPair{R, ActionField(g, {p, 0})});
    const LinearStepper lin(g, V, dt);
    const RunRecord rec_lin = evolve_linear(psi, lin, 0.0, opt);

    PolarPair state{R, ActionField(g, {p, 0})};
    ClassicalStepper::Params cp;
    cp.dt = dt;
    const ClassicalStepper cls(g, V, cp);
    EvolveOptions copt = opt;
    copt.norm_drift_abort = 1e-2;
    const RunRecord rec_cls = evolve_classical(state, cls, 0.0, copt);

    const double w0 = packet_width(rec_lin.density.rho.front())[0];
    const double w_lin = packet_width(rec_lin.density.rho.back())[0];
    const double w_cls = packet_width(rec_cls.density.rho.back())[0];
    const double tau = g.hbar * t_end / (2.0 * g.mass * l0 * l0);

    write_log_csv(out / "log.csv", rec_lin.log, {"linear split-step run"});
    write_log_csv(out / "classical_log.csv", rec_cls.log, {"classical run, same initial data"});
    write_snapshot(out, "linear_rho_initial", rec_lin.density.rho.front());
    write_snapshot(out, "linear_rho_final", rec_lin.density.rho.back());
    write_snapshot(out, "classical_rho_final", rec_cls.density.rho.back());

    return {
        {"width_initial", w0},
        {"linear_width_final", w_lin},
        {"linear_width_ratio", w_lin / w0},
        {"linear_width_ratio_exact", std::sqrt(1.0 + tau * tau)},
        {"classical_width_final", w_cls},
        {"classical_width_ratio", w_cls / w0},
        {"momentum_used", p},
        {"t_end", t_end},
    };
}

// ---------------------------------------------------------------------------
// harmonic-soliton

const std::map<std::string, std::string>& soliton_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "4096"},        {"grid.extent", "40"},  {"grid.hbar", "1"},
        {"grid.mass", "1"},        {"trap.omega", "1"},    {"packet.amplitude", "5"},
        {"packet.width", "0.15"},  {"run.t_end", "0"},     {"run.dt", "0"},
        {"run.interp_order", "7"},
    };
    return d;
}

Metrics sc_harmonic_soliton(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, soliton_defaults()};
    const Grid g = grid_1d(k);
    const double omega = k.num("trap.omega");
    const double A = k.num("packet.amplitude");
    const double sigma = k.num("packet.width");
    const double T = 2.0 * pi / omega;
    double t_end = k.num("run.t_end");
    if (t_end <= 0) t_end = T;
    double dt = k.num("run.dt");
    // the outermost trapped characteristics reach |v| ~ 0.35 extent * omega,
    // and dt * v * k_max must stay inside the RK4 spectral stability bound
    if (dt <= 0) dt = T / 16000.0;
    std::size_t steps = std::size_t(std::lround(t_end / dt));
    steps = ((steps + 7) / 8) * 8;
    dt = t_end / double(steps);

    const Potential V = Potential::harmonic(g, omega);
    PolarPair state{gaussian_amplitude(g, {A, 0}, {sigma, sigma}), ActionField(g)};

    ClassicalStepper::Params cp;
    cp.dt = dt;
    cp.interp_order = int(k.count("run.interp_order"));
    // released from rest, every characteristic focuses at the quarter period;
    // the run is expected to end at the caustic monitor, so the transport
    // budgets are disabled and the collapse is left visible in the log
    cp.clamp_budget = 1.0;
    const ClassicalStepper stepper(g, V, cp);

    EvolveOptions opt;
    opt.steps = steps;
    opt.observe_stride = 8;
    opt.frame_stride = 8;
    opt.norm_drift_abort = 0.0;

    RunRecord partial;
    RunRecord rec;
    bool caustic = false;
    CausticReport rep;
    try {
        rec = evolve_classical(state, stepper, 0.0, opt, &partial);
    } catch (const CausticError& e) {
        caustic = true;
        rep = e.report;
        rec = std::move(partial);
    }
    const double t_ref = caustic ? rep.time : t_end;

    // crest tracking is meaningful while the packet stays a few cells wide;
    // past 0.9 of the focusing time the width drops below the stencil
    const DensityFrames tracked = slice_frames(rec.density, 0.9 * t_ref);
    Trajectory crest;
    double crest_err = 0.0, vel_residual = 0.0;
    if (tracked.count() >= 3) {
        crest = crest_track(tracked, {A, 0}, {1.0, 0.0});
        const double accuracy_window = 0.8 * t_ref;
        for (std::size_t i = 0; i < crest.times.size(); ++i) {
            if (crest.times[i] > accuracy_window) break;
            crest_err = std::max(crest_err,
                                 std::abs(crest.x[i][0] - A * std::cos(omega * crest.times[i])));
        }
        const double fdt = tracked.frame_dt();
        for (std::size_t i = 1; i + 1 < crest.times.size(); ++i) {
            if (crest.times[i] > accuracy_window) break;
            const double v_fd =
                g.min_image(0, crest.x[i - 1][0], crest.x[i + 1][0]) / (2.0 * fdt);
            const double v_field = interp_at(rec.velocity.comp[i][0], crest.x[i], 3);
            vel_residual = std::max(vel_residual, std::abs(v_fd - v_field));
        }
    }

    std::vector<std::string> comments = {"harmonic trap, packet released from rest"};
    if (caustic) {
        const auto cx = g.point(rep.location);
        comments.push_back("caustic t=" + format_double(rep.time) + " x=" + format_double(cx[0]) +
                           " value=" + format_double(rep.value));
    }
    write_log_csv(out / "log.csv", rec.log, comments);
    if (!crest.times.empty()) {
        TrajectoryEnsemble wrap;
        wrap.members.push_back(crest);
        write_trajectories_csv(out / "crest.csv", wrap);
    }
    if (rec.density.count() > 0) {
        write_snapshot(out, "rho_initial", rec.density.rho.front());
        write_snapshot(out, "rho_mid", rec.density.rho[rec.density.count() / 2]);
        write_snapshot(out, "rho_last", rec.density.rho.back());
    }

    return {
        {"caustic_detected", caustic ? 1.0 : 0.0},
        {"caustic_time", caustic ? rep.time : 0.0},
        {"quarter_period", T / 4.0},
        {"caustic_time_ratio", caustic ? rep.time / (T / 4.0) : 0.0},
        {"tracked_span", crest.times.empty() ? 0.0 : crest.times.back()},
        {"requested_span", t_end},
        {"crest_max_err", crest_err},
        {"crest_err_bound", 1e-3 * A},
        {"crest_velocity_residual", vel_residual},
        {"crest_velocity_bound", 1e-2 * A * omega},
        {"clamped_mass_total", stepper.clamped_mass_total()},
    };
}

// ---------------------------------------------------------------------------
// double-slit

const std::map<std::string, std::string>& slit_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "2048"},          {"grid.extent", "40"},      {"grid.hbar", "1"},
        {"grid.mass", "1"},          {"slit.separation", "12"},  {"slit.width", "1.0"},
        {"slit.momentum", "5"},      {"classical.width", "0.8"}, {"classical.cut_sigmas", "4"},
        {"run.dt", "2.5e-4"},        {"run.classical_dt", "2e-3"}, {"compare.t_final", "0.15"},
        {"fringe.window", "2.0"},
    };
    return d;
}

Metrics sc_double_slit(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, slit_defaults()};
    const Grid g = grid_1d(k);
    const double sep = k.num("slit.separation");
    const double sigma = k.num("slit.width");
    const double p = snap_momentum(g, k.num("slit.momentum"));
    const double half = sep / 2.0;
    const double t_cross = half / (p / g.mass);
    const double window = k.num("fringe.window");
    const Potential V = Potential::zero(g);

    // linear side: counter-propagating packets, closed-form oracle
    std::size_t steps = std::size_t(std::lround(t_cross / k.num("run.dt")));
    steps = ((steps + 9) / 10) * 10;
    const double dt = t_cross / double(steps);
    ComplexField psi(g);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = g.coord(0, i);
        psi[i] = free_packet(g, -half, sigma, p, x, 0.0) + free_packet(g, half, sigma, -p, x, 0.0);
    }
    const double eta = 1.0 / std::sqrt(norm(psi));
    for (auto& c : psi.v) c *= eta;

    EvolveOptions lopt;
    lopt.steps = steps;
    lopt.observe_stride = steps / 10;
    lopt.frame_stride = steps / 10;
    lopt.capture_velocity = false;
    const LinearStepper lin(g, V, dt);
    const RunRecord rec_lin = evolve_linear(psi, lin, 0.0, lopt);

    ScalarField rho_exact(g);
    for (std::size_t i = 0; i < rho_exact.size(); ++i) {
        const double x = g.coord(0, i);
        const cplx a = free_packet(g, -half, sigma, p, x, t_cross) +
                       free_packet(g, half, sigma, -p, x, t_cross);
        rho_exact[i] = eta * eta * std::norm(a);
    }
    const ScalarField& rho_lin = rec_lin.density.rho.back();
    double oracle_err = 0.0, exact_peak = 0.0;
    for (std::size_t i = 0; i < rho_exact.size(); ++i) {
        oracle_err = std::max(oracle_err, std::abs(rho_lin[i] - rho_exact[i]));
        exact_peak = std::max(exact_peak, rho_exact[i]);
    }

    // classical mixture: the same two packets evolved as separate states;
    // densities add, nothing interferes
    const double cdt_req = k.num("run.classical_dt");
    std::size_t csteps = std::size_t(std::lround(t_cross / cdt_req));
    csteps = ((csteps + 3) / 4) * 4;
    const double cdt = t_cross / double(csteps);
    ClassicalStepper::Params cp;
    cp.dt = cdt;
    const ClassicalStepper cls(g, V, cp);
    EvolveOptions copt;
    copt.steps = csteps;
    copt.observe_stride = csteps / 4;
    copt.frame_stride = csteps;
    copt.capture_velocity = false;
    copt.norm_drift_abort = 1e-2;

    const ScalarField Rs = gaussian_amplitude(g, {-half, 0}, {sigma, sigma});
    const ScalarField Rs2 = gaussian_amplitude(g, {half, 0}, {sigma, sigma});
    PolarPair m1{Rs, ActionField(g, {p, 0})};
    PolarPair m2{Rs2, ActionField(g, {-p, 0})};
    const RunRecord rec_m1 = evolve_classical(m1, cls, 0.0, copt);
    const RunRecord rec_m2 = evolve_classical(m2, cls, 0.0, copt);
    ScalarField rho_mix(g);
    for (std::size_t i = 0; i < rho_mix.size(); ++i)
        rho_mix[i] = 0.5 * (rec_m1.density.rho.back()[i] + rec_m2.density.rho.back()[i]);

    // combined vs componentwise: compactly supported packets, disjoint
    // throughout, evolved once as a single summed state and once each
    const double csigma = k.num("classical.width");
    const double cut = k.num("classical.cut_sigmas");
    const double support_half = (cut + 1.0) * csigma;
    const double t_final = k.num("compare.t_final");
    const std::size_t ksteps = 75;  // three checkpoints, 25 steps apart
    const double kdt = t_final / double(ksteps);
    ClassicalStepper::Params kp;
    kp.dt = kdt;
    const ClassicalStepper kstep(g, V, kp);
    EvolveOptions kopt;
    kopt.steps = ksteps;
    kopt.observe_stride = 25;
    kopt.frame_stride = 25;
    kopt.capture_velocity = false;
    kopt.norm_drift_abort = 1e-2;

    const ScalarField Rc1 = gaussian_amplitude(g, {-half, 0}, {csigma, csigma}, cut);
    const ScalarField Rc2 = gaussian_amplitude(g, {half, 0}, {csigma, csigma}, cut);
    PolarPair part1{Rc1, ActionField(g, {p, 0})};
    PolarPair part2{Rc2, ActionField(g, {-p, 0})};
    PolarPair combined = superpose_nonoverlapping({part1, part2});

    const RunRecord rec_comb = evolve_classical(combined, kstep, 0.0, kopt);
    const RunRecord rec_p1 = evolve_classical(part1, kstep, 0.0, kopt);
    const RunRecord rec_p2 = evolve_classical(part2, kstep, 0.0, kopt);
    double split_err = 0.0;
    for (std::size_t f = 1; f < rec_comb.density.count(); ++f)
        for (std::size_t i = 0; i < g.size(); ++i)
            split_err = std::max(split_err, std::abs(rec_comb.density.rho[f][i] -
                                                     rec_p1.density.rho[f][i] -
                                                     rec_p2.density.rho[f][i]));
    const double final_gap = sep - 2.0 * support_half - 2.0 * (p / g.mass) * t_final;
    const CausticReport fan = caustic_monitor(combined.S, kstep, t_final);

    write_log_csv(out / "log.csv", rec_lin.log, {"linear run, two counter-propagating packets"});
    write_log_csv(out / "mixture_log.csv", rec_m1.log, {"classical mixture member 1"});
    write_log_csv(out / "combined_log.csv", rec_comb.log, {"classical combined state"});
    write_snapshot(out, "linear_final", rho_lin);
    write_snapshot(out, "oracle_final", rho_exact);
    write_snapshot(out, "mixture_final", rho_mix);
    write_snapshot(out, "combined_final", rec_comb.density.rho.back());
    ScalarField parts_sum(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        parts_sum[i] = rec_p1.density.rho.back()[i] + rec_p2.density.rho.back()[i];
    write_snapshot(out, "parts_sum_final", parts_sum);

    return {
        {"momentum_used", p},
        {"t_cross", t_cross},
        {"fringe_spacing", pi * g.hbar / p},
        {"visibility_linear", fringe_visibility(rho_lin, window)},
        {"visibility_exact", fringe_visibility(rho_exact, window)},
        {"visibility_mixture", fringe_visibility(rho_mix, window)},
        {"oracle_max_err_rel", oracle_err / exact_peak},
        {"combined_vs_parts_max", split_err},
        {"support_halfwidth", support_half},
        {"final_gap", final_gap},
        {"gap_caustic_metric", fan.value * kdt / g.mass},
    };
}

// ---------------------------------------------------------------------------
// equivariance

const std::map<std::string, std::string>& equivariance_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "4096"},         {"grid.extent", "40"},      {"grid.hbar", "1"},
        {"grid.mass", "1"},         {"trap.omega", "1"},        {"packet.center", "3"},
        {"packet.width", "0.5"},    {"run.dt", "0"},            {"run.interp_order", "7"},
        {"ensemble.n", "20000"},    {"ensemble.seed", "20260816"},
        {"ensemble.threads", "0"},  {"ensemble.dt", "0"},       {"histogram.bins", "64"},
    };
    return d;
}

/// Shared harmonic rest-release run: the window stops at 0.95 of the quarter
/// period, just short of the global focusing caustic (on a periodic domain
/// the at-rest far field focuses then too, so no initial action can push the
/// regular window past T/4).
struct HarmonicWindow {
    Grid g;
    Potential V;
    PolarPair state;
    RunRecord rec;
    double t_end = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
};

HarmonicWindow harmonic_window_run(const Keyed& k, double window_fraction,
                                   std::size_t stride_granularity) {
    HarmonicWindow hw;
    hw.g = grid_1d(k);
    const double omega = k.num("trap.omega");
    const double T = 2.0 * pi / omega;
    double dt = k.num("run.dt");
    if (dt <= 0) dt = T / 16000.0;  // same stability bound as the soliton run
    std::size_t steps = std::size_t(std::lround(window_fraction * (T / 4.0) / dt));
    steps = ((steps + stride_granularity - 1) / stride_granularity) * stride_granularity;
    hw.steps = steps;
    hw.t_end = window_fraction * (T / 4.0);
    hw.dt = hw.t_end / double(steps);

    hw.V = Potential::harmonic(hw.g, omega);
    hw.state = PolarPair{
        gaussian_amplitude(hw.g, {k.num("packet.center"), 0},
                           {k.num("packet.width"), k.num("packet.width")}),
        ActionField(hw.g)};

    ClassicalStepper::Params cp;
    cp.dt = hw.dt;
    cp.interp_order = int(k.count("run.interp_order"));
    cp.clamp_budget = 1e-3;
    const ClassicalStepper stepper(hw.g, hw.V, cp);

    EvolveOptions opt;
    opt.steps = steps;
    opt.observe_stride = steps / stride_granularity;
    opt.frame_stride = steps / stride_granularity;
    opt.norm_drift_abort = 0.05;
    hw.rec = evolve_classical(hw.state, stepper, 0.0, opt);
    return hw;
}

Metrics sc_equivariance(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, equivariance_defaults()};
    // 100 frames; checkpoints every 10th, so 10 checkpoints across the window
    HarmonicWindow hw = harmonic_window_run(k, 0.95, 100);
    const double T = 2.0 * pi / k.num("trap.omega");

    double ens_dt = k.num("ensemble.dt");
    if (ens_dt <= 0) ens_dt = T / 1000.0;
    const std::size_t n = std::size_t(k.count("ensemble.n"));
    const std::uint64_t seed = std::uint64_t(k.count("ensemble.seed"));
    const int threads = auto_threads(k.count("ensemble.threads"));
    const std::size_t bins = std::size_t(k.count("histogram.bins"));

    const FrameVelocity src(hw.rec.velocity);
    const TrajectoryEnsemble ens =
        propagate_ensemble(hw.rec.density.rho.front(), src, n, 0.0, hw.t_end, ens_dt, seed, threads);

    ObservationLog checkpoints;
    checkpoints.columns = {"l1"};
    double l1_max = 0.0, l1_sum = 0.0;
    for (std::size_t c = 1; c <= 10; ++c) {
        const std::size_t frame = c * 10;
        const double t = hw.rec.density.times[frame];
        const double l1 = histogram_l1(ens, t, hw.rec.density.rho[frame], bins);
        checkpoints.add(t, {l1});
        l1_max = std::max(l1_max, l1);
        l1_sum += l1;
    }

    ClassicalStepper::Params mp;
    mp.dt = hw.dt;
    const ClassicalStepper monitor_stepper(hw.g, hw.V, mp);
    const CausticReport final_monitor = caustic_monitor(hw.state.S, monitor_stepper, hw.t_end);

    write_log_csv(out / "log.csv", hw.rec.log, {"classical harmonic run, rest release"});
    write_log_csv(out / "checkpoints.csv", checkpoints,
                  {"histogram L1 against the solver density"});
    write_trajectories_csv(out / "trajectories.csv", ens, 100);
    write_snapshot(out, "rho_initial", hw.rec.density.rho.front());
    write_snapshot(out, "rho_final", hw.rec.density.rho.back());

    return {
        {"l1_max", l1_max},
        {"l1_mean", l1_sum / 10.0},
        {"aborted_fraction", ens.aborted_fraction()},
        {"aborted_count", double(ens.aborted_count)},
        {"members", double(n)},
        {"t_end", hw.t_end},
        {"caustic_metric_final", final_monitor.value * hw.dt / hw.g.mass},
    };
}

// ---------------------------------------------------------------------------
// ehrenfest

const std::map<std::string, std::string>& ehrenfest_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "4096"},      {"grid.extent", "40"},  {"grid.hbar", "1"},
        {"grid.mass", "1"},      {"trap.omega", "1"},    {"packet.center", "3"},
        {"packet.width", "0.5"}, {"run.dt", "0"},        {"run.interp_order", "5"},
        {"frames.per_period", "500"},
    };
    return d;
}

Metrics sc_ehrenfest(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, ehrenfest_defaults()};
    const Grid g = grid_1d(k);
    const double omega = k.num("trap.omega");
    const double A = k.num("packet.center");
    const double T = 2.0 * pi / omega;
    double dt = k.num("run.dt");
    if (dt <= 0) dt = T / 16000.0;
    const long per_period = k.count("frames.per_period");
    // fine cadence at twice the requested rate; the coarse set drops every
    // other frame, giving the exact cadence-halving comparison
    std::size_t stride_fine = std::size_t(std::lround(T / (2.0 * double(per_period) * dt)));
    stride_fine = std::max<std::size_t>(1, stride_fine);
    std::size_t steps = std::size_t(std::lround(0.2 * T / dt));
    steps = ((steps + 2 * stride_fine - 1) / (2 * stride_fine)) * (2 * stride_fine);
    dt = 0.2 * T / double(steps);

    const Potential V = Potential::harmonic(g, omega);
    const ScalarField R =
        gaussian_amplitude(g, {A, 0}, {k.num("packet.width"), k.num("packet.width")});

    EvolveOptions opt;
    opt.steps = steps;
    opt.observe_stride = stride_fine;
    opt.frame_stride = stride_fine;

    ComplexField psi = compose(PolarPair{R, ActionField(g)});
    const LinearStepper lin(g, V, dt);
    const RunRecord rec_lin = evolve_linear(psi, lin, 0.0, opt);

    PolarPair state{R, ActionField(g)};
    ClassicalStepper::Params cp;
    cp.dt = dt;
    cp.interp_order = int(k.count("run.interp_order"));
    const ClassicalStepper cls(g, V, cp);
    EvolveOptions copt = opt;
    copt.norm_drift_abort = 0.05;
    const RunRecord rec_cls = evolve_classical(state, cls, 0.0, copt);

    const EhrenfestResiduals lin_fine = ehrenfest_residuals(rec_lin.density, rec_lin.velocity, V);
    const EhrenfestResiduals lin_coarse =
        ehrenfest_residuals(half_density(rec_lin.density), half_velocity(rec_lin.velocity), V);
    const EhrenfestResiduals cls_fine = ehrenfest_residuals(rec_cls.density, rec_cls.velocity, V);
    const EhrenfestResiduals cls_coarse =
        ehrenfest_residuals(half_density(rec_cls.density), half_velocity(rec_cls.velocity), V);

    ObservationLog table;
    table.columns = {"linear_r1", "linear_r2", "classical_r1", "classical_r2"};
    for (std::size_t i = 0; i < lin_coarse.times.size(); ++i)
        table.add(lin_coarse.times[i],
                  {lin_coarse.r1[i], lin_coarse.r2[i], cls_coarse.r1[i], cls_coarse.r2[i]});

    write_log_csv(out / "log.csv", rec_lin.log, {"linear harmonic run"});
    write_log_csv(out / "classical_log.csv", rec_cls.log, {"classical harmonic run"});
    write_log_csv(out / "residuals.csv", table, {"mean-motion residuals, coarse frame cadence"});
    write_snapshot(out, "rho_initial", rec_lin.density.rho.front());
    write_snapshot(out, "rho_final_linear", rec_lin.density.rho.back());
    write_snapshot(out, "rho_final_classical", rec_cls.density.rho.back());

    return {
        {"amplitude", A},
        {"frame_dt_coarse", 2.0 * double(stride_fine) * dt},
        {"residual_bound", 1e-4 * g.mass * omega * omega * A},
        {"linear_r2_coarse", lin_coarse.max_r2()},
        {"linear_r2_fine", lin_fine.max_r2()},
        {"linear_r2_ratio", lin_coarse.max_r2() / lin_fine.max_r2()},
        {"linear_r1_coarse", lin_coarse.max_r1()},
        {"classical_r2_coarse", cls_coarse.max_r2()},
        {"classical_r2_fine", cls_fine.max_r2()},
        {"classical_r2_ratio", cls_coarse.max_r2() / cls_fine.max_r2()},
        {"classical_r1_coarse", cls_coarse.max_r1()},
    };
}

// ---------------------------------------------------------------------------
// pure-vs-mixed

const std::map<std::string, std::string>& pure_mixed_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "1024"},       {"grid.extent", "40"}, {"grid.hbar", "1"},
        {"grid.mass", "1"},       {"basis.members", "8"}, {"draws.weights", "100"},
        {"draws.observables", "100"}, {"draws.modes", "8"}, {"draws.seed", "20260816"},
    };
    return d;
}

Metrics sc_pure_vs_mixed(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, pure_mixed_defaults()};
    const Grid g = grid_1d(k);
    const std::size_t members = std::size_t(k.count("basis.members"));
    const long n_w = k.count("draws.weights");
    const long n_a = k.count("draws.observables");
    const long modes = k.count("draws.modes");
    const std::uint64_t seed = std::uint64_t(k.count("draws.seed"));

    const PositiveBasis basis = PositiveBasis::bumps(g, members);

    // band-limited random observables A(x); smoothness is irrelevant to the
    // identity being probed but keeps the integrals quadrature-exact
    std::vector<DensityMatrix> A_mats;
    A_mats.reserve(std::size_t(n_a));
    for (long j = 0; j < n_a; ++j) {
        SplitStream rng(seed, 1000000 + std::uint64_t(j));
        std::vector<double> ca(std::size_t(modes) + 1), cb(std::size_t(modes) + 1);
        for (auto& c : ca) c = 2.0 * rng.next_double() - 1.0;
        for (auto& c : cb) c = 2.0 * rng.next_double() - 1.0;
        ScalarField A(g);
        for (std::size_t i = 0; i < A.size(); ++i) {
            const double x = g.coord(0, i);
            double v = 0.0;
            for (long q = 0; q <= modes; ++q) {
                const double w = 2.0 * pi * double(q) * x / g.extent[0];
                v += ca[std::size_t(q)] * std::cos(w) + cb[std::size_t(q)] * std::sin(w);
            }
            A[i] = v;
        }
        A_mats.push_back(observable_matrix(basis, A));
    }

    const auto contract = [](const DensityMatrix& rho, const DensityMatrix& Am) {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.size; ++i)
            for (std::size_t j = 0; j < rho.size; ++j) s += rho.at(i, j) * Am.at(i, j);
        return s;
    };

    ObservationLog per_draw;
    per_draw.columns = {"max_diff"};
    double max_diff = 0.0;
    DensityMatrix first_pure, first_mixed;
    for (long i = 0; i < n_w; ++i) {
        SplitStream rng(seed, std::uint64_t(i));
        std::vector<double> w(members);
        double sum = 0.0;
        for (auto& wi : w) {
            wi = rng.next_double();
            sum += wi;
        }
        for (auto& wi : w) wi /= sum;
        const DensityMatrix rho_pure = pure_density(w);
        const DensityMatrix rho_mixed = mixed_density(w);
        if (i == 0) {
            first_pure = rho_pure;
            first_mixed = rho_mixed;
        }
        double draw_max = 0.0;
        for (const auto& Am : A_mats)
            draw_max = std::max(draw_max, std::abs(contract(rho_pure, Am) - contract(rho_mixed, Am)));
        per_draw.add(double(i), {draw_max});
        max_diff = std::max(max_diff, draw_max);
    }

    const ExchangeReport ex = exchange_density(basis.member(1), basis.member(members / 2));
    const std::vector<double> eigs = symmetric_eigenvalues(first_pure);

    write_log_csv(out / "log.csv", per_draw,
                  {"per weight draw: max |<A>_pure - <A>_mixed| over observables"});
    write_density_matrix_csv(out / "density_matrix_pure.csv", first_pure,
                             std::to_string(members) + " disjoint bumps");
    write_density_matrix_csv(out / "density_matrix_mixed.csv", first_mixed,
                             std::to_string(members) + " disjoint bumps");
    for (std::size_t b = 0; b < members; ++b)
        write_snapshot(out, "basis_" + std::to_string(b), basis.member(b));

    return {
        {"max_pure_mixed_diff", max_diff},
        {"exchange_overlap", ex.overlap},
        {"exchange_weight", ex.exchange_weight},
        {"exchange_direct_weight", ex.direct_weight},
        {"pure_trace_err", std::abs(first_pure.trace() - 1.0)},
        {"mixed_trace_err", std::abs(first_mixed.trace() - 1.0)},
        {"pure_second_eigenvalue", eigs.size() >= 2 ? std::abs(eigs[eigs.size() - 2]) : 0.0},
        {"weight_draws", double(n_w)},
        {"observable_draws", double(n_a)},
    };
}

// ---------------------------------------------------------------------------
// exchange-term

const std::map<std::string, std::string>& exchange_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "1024"},      {"grid.extent", "40"},      {"grid.hbar", "1"},
        {"grid.mass", "1"},      {"packet.width", "0.8"},    {"packet.cut_sigmas", "4"},
        {"sep.max", "20"},       {"sep.min", "8.5"},         {"sep.count", "6"},
    };
    return d;
}

Metrics sc_exchange_term(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, exchange_defaults()};
    const Grid g = grid_1d(k);
    const double sigma = k.num("packet.width");
    const double cut = k.num("packet.cut_sigmas");
    const double support_half = (cut + 1.0) * sigma;
    const double s_max = k.num("sep.max");
    const double s_min = k.num("sep.min");
    const long count = k.count("sep.count");
    if (s_min <= 2.0 * support_half)
        throw ConfigError("sep.min must exceed the combined support width " +
                          format_double(2.0 * support_half));

    ObservationLog table;
    table.columns = {"overlap", "exchange_weight", "direct_weight", "cross_term_max"};
    double exchange_max = 0.0, direct = 0.0;
    for (long i = 0; i < count; ++i) {
        const double sep =
            count > 1 ? s_max + (s_min - s_max) * double(i) / double(count - 1) : s_max;
        const ScalarField R1 = gaussian_amplitude(g, {-sep / 2.0, 0}, {sigma, sigma}, cut);
        const ScalarField R2 = gaussian_amplitude(g, {sep / 2.0, 0}, {sigma, sigma}, cut);
        const ExchangeReport rep = exchange_density(R1, R2);
        double cross = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q)
            cross = std::max(cross, std::abs(R1[q] * R2[q]));
        table.add(sep, {rep.overlap, rep.exchange_weight, rep.direct_weight, cross});
        exchange_max = std::max(exchange_max, rep.exchange_weight);
        direct = rep.direct_weight;
        if (i + 1 == count) {
            ScalarField pair(g);
            for (std::size_t q = 0; q < g.size(); ++q)
                pair[q] = 0.5 * (R1[q] * R1[q] + R2[q] * R2[q]);
            write_snapshot(out, "pair_density", pair);
        }
    }

    // untruncated Gaussians at the closest separation: the tails do overlap,
    // which is exactly what the compact supports above remove
    const ScalarField G1 = gaussian_amplitude(g, {-s_min / 2.0, 0}, {sigma, sigma});
    const ScalarField G2 = gaussian_amplitude(g, {s_min / 2.0, 0}, {sigma, sigma});
    const double g_overlap = inner(G1, G2);
    const double g_overlap_exact = std::exp(-s_min * s_min / (8.0 * sigma * sigma));

    write_log_csv(out / "log.csv", table, {"separation sweep, compactly supported pairs"});

    return {
        {"exchange_weight_max", exchange_max},
        {"direct_weight", direct},
        {"gaussian_overlap_at_min", g_overlap},
        {"gaussian_overlap_exact", g_overlap_exact},
        {"min_separation", s_min},
        {"support_halfwidth", support_half},
    };
}

// ---------------------------------------------------------------------------
// phase-space

const std::map<std::string, std::string>& phase_space_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "4096"},        {"grid.extent", "40"},  {"grid.hbar", "1"},
        {"grid.mass", "1"},        {"trap.omega", "1"},    {"packet.center", "3"},
        {"packet.width", "0.5"},   {"run.dt", "0"},        {"run.interp_order", "7"},
        {"ensemble.n", "40000"},   {"ensemble.seed", "20260816"}, {"ensemble.dt", "0"},
        {"histogram.bins", "64"},
    };
    return d;
}

Metrics sc_phase_space(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, phase_space_defaults()};
    const double omega = k.num("trap.omega");
    const double T = 2.0 * pi / omega;
    double pdt = k.num("ensemble.dt");
    if (pdt <= 0) pdt = T / 2000.0;
    const std::size_t n = std::size_t(k.count("ensemble.n"));
    const std::uint64_t seed = std::uint64_t(k.count("ensemble.seed"));
    const std::size_t bins = std::size_t(k.count("histogram.bins"));

    const Grid g = grid_1d(k);
    const PolarPair initial{
        gaussian_amplitude(g, {k.num("packet.center"), 0},
                           {k.num("packet.width"), k.num("packet.width")}),
        ActionField(g)};
    const PhaseSpaceEnsemble ens0 = phase_space_from_pure(initial, n, seed);

    // PDE reference over the pre-caustic window
    HarmonicWindow hw = harmonic_window_run(k, 0.95, 10);

    // compare mid-window while the packet still spans several histogram bins,
    // then again at the window end where it has focused into a single bin
    PhaseSpaceEnsemble window_ens = ens0;
    const std::size_t mid = hw.rec.density.count() / 2;
    const double t_mid = hw.rec.density.times[mid];
    evolve_phase_space(window_ens, hw.V, 0.0, t_mid, pdt);
    const double l1_pde_mid = phase_space_position_l1(window_ens, hw.rec.density.rho[mid], bins);
    evolve_phase_space(window_ens, hw.V, t_mid, hw.t_end, pdt);
    const double l1_pde = phase_space_position_l1(window_ens, hw.rec.density.rho.back(), bins);

    // the point ensemble is untroubled by the caustic: march through it to a
    // full period and the marginal refocuses onto the initial density
    const auto energy = [&](const PhaseSpaceEnsemble& e) {
        return phase_space_average(e, [&](std::array<double, 2> x, std::array<double, 2> p) {
            return p[0] * p[0] / (2.0 * g.mass) + hw.V.value(x, 0.0);
        });
    };
    const auto mean_x = [&](const PhaseSpaceEnsemble& e) {
        return phase_space_average(e, [](std::array<double, 2> x, std::array<double, 2>) {
            return x[0];
        });
    };
    const auto mean_p = [&](const PhaseSpaceEnsemble& e) {
        return phase_space_average(e, [](std::array<double, 2>, std::array<double, 2> p) {
            return p[0];
        });
    };

    PhaseSpaceEnsemble ens = ens0;
    const double e0 = energy(ens);
    const double x0 = mean_x(ens);
    ObservationLog march;
    march.columns = {"mean_x", "mean_p", "energy"};
    march.add(0.0, {x0, mean_p(ens), e0});
    for (int seg = 1; seg <= 10; ++seg) {
        evolve_phase_space(ens, hw.V, double(seg - 1) * T / 10.0, double(seg) * T / 10.0, pdt);
        march.add(double(seg) * T / 10.0, {mean_x(ens), mean_p(ens), energy(ens)});
    }
    const double l1_return = phase_space_position_l1(ens, hw.rec.density.rho.front(), bins);
    const double e1 = energy(ens);

    write_log_csv(out / "log.csv", march, {"phase-space ensemble march over one period"});
    write_log_csv(out / "classical_log.csv", hw.rec.log, {"classical reference run"});
    write_phase_space_csv(out / "phase_space_initial.csv", ens0);
    write_phase_space_csv(out / "phase_space_final.csv", ens);
    write_snapshot(out, "rho_initial", hw.rec.density.rho.front());
    write_snapshot(out, "rho_window_end", hw.rec.density.rho.back());

    return {
        {"l1_pde_mid", l1_pde_mid},
        {"l1_pde_window", l1_pde},
        {"l1_return", l1_return},
        {"energy_drift_rel", std::abs(e1 - e0) / std::abs(e0)},
        {"mean_x_return_err", std::abs(mean_x(ens) - x0)},
        {"points", double(n)},
        {"t_window", hw.t_end},
    };
}

// ---------------------------------------------------------------------------
// bohr

const std::map<std::string, std::string>& bohr_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.n", "256"},   {"grid.extent", "40"}, {"grid.hbar", "1"},
        {"grid.mass", "1"},  {"coulomb.k", "1"},    {"levels.n_max", "3"},
        {"levels.rejected", "2.5"},
    };
    return d;
}

Metrics sc_bohr(const ScenarioConfig& cfg, const fs::path& out) {
    const Keyed k{cfg, bohr_defaults()};
    const std::size_t n = std::size_t(k.count("grid.n"));
    const double L = k.num("grid.extent");
    const Grid g(n, n, L, L, k.num("grid.hbar"), k.num("grid.mass"));
    const double kc = k.num("coulomb.k");
    const int n_max = int(k.count("levels.n_max"));
    const double rejected_l = k.num("levels.rejected");

    const LoopPath loop = LoopPath::rectangle(g, n / 4, 3 * n / 4, n / 4, 3 * n / 4);
    const auto angle_action = [&](double l_over_hbar) {
        ScalarField S(g);
        for (std::size_t i = 0; i < S.size(); ++i) {
            const auto p = g.point(i);
            S[i] = l_over_hbar * g.hbar * std::atan2(p[1], p[0]);
        }
        return S;
    };

    Metrics metrics;
    ObservationLog table;
    table.columns = {"r", "E", "hj_residual", "winding", "winding_residual"};
    const auto levels = coulomb_circular_spectrum(kc, g.mass, g.hbar, n_max);
    std::vector<bool> winding_ok;
    double residual_max = 0.0, hj_max = 0.0;
    for (const auto& lvl : levels) {
        const BohrCheck chk = bohr_check(angle_action(double(lvl.n)), loop);
        winding_ok.push_back(chk.quantized && chk.winding.n == lvl.n);
        residual_max = std::max(residual_max, chk.winding.residual);
        hj_max = std::max(hj_max, lvl.hj_residual);
        table.add(double(lvl.n),
                  {lvl.r, lvl.E, lvl.hj_residual, double(chk.winding.n), chk.winding.residual});
        metrics.emplace_back("E_" + std::to_string(lvl.n), lvl.E);
        metrics.emplace_back("winding_" + std::to_string(lvl.n), double(chk.winding.n));
    }

    const BohrCheck rej = bohr_check(angle_action(rejected_l), loop);

    metrics.emplace_back("winding_residual_max", residual_max);
    metrics.emplace_back("hj_residual_max", hj_max);
    metrics.emplace_back("rejected_l", rejected_l);
    metrics.emplace_back("rejected_residual", rej.winding.residual);
    metrics.emplace_back("rejected_quantized", rej.quantized ? 1.0 : 0.0);
    metrics.emplace_back("r_max", levels.back().r);

    write_log_csv(out / "log.csv", table, {"circular Coulomb orbits"});
    write_spectrum_csv(out / "spectrum.csv", levels, winding_ok);
    write_snapshot(out, "action_n1", angle_action(1.0));

    return metrics;
}

// ---------------------------------------------------------------------------

struct ScenarioEntry {
    ScenarioInfo info;
    Metrics (*fn)(const ScenarioConfig&, const fs::path&);
};

const std::vector<ScenarioEntry>& registry() {
    static const std::vector<ScenarioEntry> entries = {
        {{"free-dispersion",
          "Free Gaussian packet: the linear wave widens by sqrt(2) at t = 2 m l0^2 / hbar "
          "while the classical packet keeps its width.",
          free_defaults()},
         sc_free_dispersion},
        {{"harmonic-soliton",
          "Classical packet released from rest in a harmonic trap: the crest follows the "
          "classical orbit until the focusing caustic near the quarter period ends the run.",
          soliton_defaults()},
         sc_harmonic_soliton},
        {{"double-slit",
          "Two counter-propagating packets: the linear wave interferes at the crossing, a "
          "classical mixture shows no fringes, and disjoint classical packets evolve the same "
          "whether stored as one state or two.",
          slit_defaults()},
         sc_double_slit},
        {{"equivariance",
          "Trajectories sampled from the initial density and carried by the classical velocity "
          "field reproduce the solver density at every checkpoint (histogram L1).",
          equivariance_defaults()},
         sc_equivariance},
        {{"ehrenfest",
          "Mean-motion identities d<x>/dt = <v> and m d2<x>/dt2 = <F> for both solvers, with "
          "the finite-difference residual falling at second order in the frame cadence.",
          ehrenfest_defaults()},
         sc_ehrenfest},
        {{"pure-vs-mixed",
          "Pure and mixed density matrices over disjoint positive amplitudes give identical "
          "position-diagonal averages; the exchange term vanishes.",
          pure_mixed_defaults()},
         sc_pure_vs_mixed},
        {{"exchange-term",
          "Overlap, direct and exchange weights for compactly supported amplitude pairs across "
          "a separation sweep.",
          exchange_defaults()},
         sc_exchange_term},
        {{"phase-space",
          "Ensemble of phase-space points from a classical packet: the position marginal tracks "
          "the solver before the focusing caustic and refocuses after a full period.",
          phase_space_defaults()},
         sc_phase_space},
        {{"bohr",
          "Action winding on circular Coulomb orbits: integer multiples of hbar wind cleanly, "
          "fractional ones are rejected, and the circular-orbit energies follow.",
          bohr_defaults()},
         sc_bohr},
    };
    return entries;
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
}

std::vector<std::pair<std::string, double>> run_scenario(const std::string& name,
                                                         const ScenarioConfig& config,
                                                         const std::filesystem::path& out_dir) {
    const ScenarioEntry* entry = nullptr;
    for (const auto& e : registry())
        if (e.info.name == name) entry = &e;
    if (!entry) throw ConfigError("unknown scenario: " + name);
    for (const auto& [key, value] : config.values())
        if (!entry->info.defaults.count(key))
            throw ConfigError("scenario '" + name + "' does not accept key '" + key + "'");
    std::filesystem::create_directories(out_dir / "snapshots");
    const auto metrics = entry->fn(config, out_dir);
    write_summary_csv(out_dir / "summary.csv", metrics);
    return metrics;
}

}  // namespace clsim
