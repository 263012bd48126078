#include "clsim/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace clsim {

namespace {

// FFTW's planner mutates global state; creation/destruction must be
// serialized. Execution on distinct buffers is safe, and every thread gets
// its own workspace below, so only planning takes the lock.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Workspace {
    std::size_t n0, n1;
    fftw_complex* buf;
    fftw_plan fwd, bwd;

    Workspace(std::size_t n0_, std::size_t n1_) : n0(n0_), n1(n1_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        buf = fftw_alloc_complex(n0 * n1);
        if (n1 == 1) {
            fwd = fftw_plan_dft_1d(int(n0), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_1d(int(n0), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_2d(int(n0), int(n1), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_2d(int(n0), int(n1), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }
    ~Workspace() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace_for(const Grid& g) {
    thread_local std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<Workspace>> cache;
    const std::size_t n1 = g.dim == 2 ? g.n[1] : 1;
    auto key = std::make_pair(g.n[0], n1);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Workspace>(g.n[0], n1)).first;
    return *it->second;
}

void load(Workspace& w, const std::vector<cplx>& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        w.buf[i][0] = data[i].real();
        w.buf[i][1] = data[i].imag();
    }
}

void store(const Workspace& w, std::vector<cplx>& data, double scale) {
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = cplx(w.buf[i][0] * scale, w.buf[i][1] * scale);
}

// Applies mult(j0, j1) to the spectrum of f in place.
template <typename Mult>
void spectral_apply(const Grid& g, std::vector<cplx>& data, Mult&& mult) {
    Workspace& w = workspace_for(g);
    load(w, data);
    fftw_execute(w.fwd);
    const std::size_t n1 = g.dim == 2 ? g.n[1] : 1;
    for (std::size_t j0 = 0; j0 < g.n[0]; ++j0)
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            const cplx factor = mult(j0, j1);
            const std::size_t i = j0 * n1 + j1;
            const cplx z = cplx(w.buf[i][0], w.buf[i][1]) * factor;
            w.buf[i][0] = z.real();
            w.buf[i][1] = z.imag();
        }
    fftw_execute(w.bwd);
    store(w, data, 1.0 / double(g.size()));
}

std::vector<cplx> to_complex(const ScalarField& f) {
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

ScalarField real_part(const Grid& g, const std::vector<cplx>& data) {
    ScalarField out(g);
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return out;
}

}  // namespace

void fft_forward(const Grid& g, std::vector<cplx>& data) {
    Workspace& w = workspace_for(g);
    load(w, data);
    fftw_execute(w.fwd);
    store(w, data, 1.0);
}

void fft_backward(const Grid& g, std::vector<cplx>& data) {
    Workspace& w = workspace_for(g);
    load(w, data);
    fftw_execute(w.bwd);
    store(w, data, 1.0 / double(g.size()));
}

namespace {

template <typename FieldT>
FieldT gradient_impl(const FieldT& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw Error("gradient: axis out of range");
    std::vector<cplx> data;
    if constexpr (std::is_same_v<FieldT, ScalarField>)
        data = to_complex(f);
    else
        data = f.v;
    const std::size_t nyq = g.n[axis] / 2;
    spectral_apply(g, data, [&](std::size_t j0, std::size_t j1) -> cplx {
        const std::size_t j = axis == 0 ? j0 : j1;
        if (j == nyq) return 0.0;  // ik has no consistent sign at Nyquist
        return cplx(0.0, g.wavenumber(axis, j));
    });
    if constexpr (std::is_same_v<FieldT, ScalarField>) {
        return real_part(g, data);
    } else {
        FieldT out(g);
        out.v = std::move(data);
        return out;
    }
}

template <typename FieldT>
FieldT laplacian_impl(const FieldT& f) {
    const Grid& g = f.grid;
    std::vector<cplx> data;
    if constexpr (std::is_same_v<FieldT, ScalarField>)
        data = to_complex(f);
    else
        data = f.v;
    spectral_apply(g, data, [&](std::size_t j0, std::size_t j1) -> cplx {
        double k2 = g.wavenumber(0, j0) * g.wavenumber(0, j0);
        if (g.dim == 2) k2 += g.wavenumber(1, j1) * g.wavenumber(1, j1);
        return -k2;
    });
    if constexpr (std::is_same_v<FieldT, ScalarField>) {
        return real_part(g, data);
    } else {
        FieldT out(g);
        out.v = std::move(data);
        return out;
    }
}

}  // namespace

ScalarField gradient(const ScalarField& f, int axis) { return gradient_impl(f, axis); }
ComplexField gradient(const ComplexField& f, int axis) { return gradient_impl(f, axis); }
ScalarField laplacian(const ScalarField& f) { return laplacian_impl(f); }
ComplexField laplacian(const ComplexField& f) { return laplacian_impl(f); }

ScalarField antiderivative(const ScalarField& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw Error("antiderivative: axis out of range");
    auto data = to_complex(f);
    const std::size_t nyq = g.n[axis] / 2;
    spectral_apply(g, data, [&](std::size_t j0, std::size_t j1) -> cplx {
        const std::size_t j = axis == 0 ? j0 : j1;
        // Modes constant along the axis (j = 0) have no periodic
        // antiderivative; they and the Nyquist mode are dropped.
        if (j == 0 || j == nyq) return 0.0;
        return 1.0 / cplx(0.0, g.wavenumber(axis, j));
    });
    return real_part(g, data);
}

}  // namespace clsim
