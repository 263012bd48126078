#include "clsim/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace clsim {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

std::string grid_descriptor(const Grid& g) {
    std::string s = "# grid: dim=" + std::to_string(g.dim);
    s += " n=" + std::to_string(g.n[0]);
    if (g.dim == 2) s += "x" + std::to_string(g.n[1]);
    s += " extent=" + format_double(g.extent[0]);
    if (g.dim == 2) s += "x" + format_double(g.extent[1]);
    s += " hbar=" + format_double(g.hbar) + " mass=" + format_double(g.mass);
    return s;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
    auto out = open_out(path);
    const Grid& g = f.grid;
    out << grid_descriptor(g) << "\n";
    out << (g.dim == 2 ? "i,j,x,y,value\n" : "i,x,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto ij = g.unpack(i);
        const auto p = g.point(i);
        out << ij[0];
        if (g.dim == 2) out << "," << ij[1];
        out << "," << format_double(p[0]);
        if (g.dim == 2) out << "," << format_double(p[1]);
        out << "," << format_double(f[i]) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

void write_field_raw(const std::filesystem::path& path, const ScalarField& f) {
    {
        auto out = open_out(path, true);
        static_assert(sizeof(double) == 8);
        // numbers are stored little-endian; every supported target is
        out.write(reinterpret_cast<const char*>(f.v.data()),
                  std::streamsize(f.v.size() * sizeof(double)));
        if (!out) throw Error("write failed: " + path.string());
    }
    auto side = open_out(path.string() + ".txt");
    side << grid_descriptor(f.grid) << "\n"
         << "# layout: float64 little-endian, row-major, " << f.v.size() << " values\n";
}

std::vector<double> ObservationLog::column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != name) continue;
        std::vector<double> out(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r].at(c);
        return out;
    }
    throw Error("log has no column named " + name);
}

void write_log_csv(const std::filesystem::path& path, const ObservationLog& log,
                   const std::vector<std::string>& comments) {
    auto out = open_out(path);
    for (const auto& c : comments) out << (c.rfind("#", 0) == 0 ? "" : "# ") << c << "\n";
    out << "t";
    for (const auto& c : log.columns) out << "," << c;
    out << "\n";
    for (std::size_t r = 0; r < log.times.size(); ++r) {
        out << format_double(log.times[r]);
        for (double v : log.rows[r]) out << "," << format_double(v);
        out << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, double>>& metrics) {
    auto out = open_out(path);
    out << "metric,value\n";
    for (const auto& [name, value] : metrics) out << name << "," << format_double(value) << "\n";
    if (!out) throw Error("write failed: " + path.string());
}

void write_trajectories_csv(const std::filesystem::path& path, const TrajectoryEnsemble& ens,
                            std::size_t max_members) {
    auto out = open_out(path);
    out << "traj,t,x,y,aborted\n";
    const std::size_t count =
        max_members ? std::min(max_members, ens.members.size()) : ens.members.size();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& m = ens.members[i];
        for (std::size_t k = 0; k < m.times.size(); ++k)
            out << i << "," << format_double(m.times[k]) << "," << format_double(m.x[k][0]) << ","
                << format_double(m.x[k][1]) << "," << (m.aborted ? 1 : 0) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

void write_phase_space_csv(const std::filesystem::path& path, const PhaseSpaceEnsemble& ens) {
    auto out = open_out(path);
    out << "weight,x,y,px,py\n";
    for (const auto& pt : ens.points)
        out << format_double(pt.weight) << "," << format_double(pt.x[0]) << ","
            << format_double(pt.x[1]) << "," << format_double(pt.p[0]) << ","
            << format_double(pt.p[1]) << "\n";
    if (!out) throw Error("write failed: " + path.string());
}

void write_density_matrix_csv(const std::filesystem::path& path, const DensityMatrix& dm,
                              const std::string& basis_descriptor) {
    auto out = open_out(path);
    out << "# basis: " << basis_descriptor << "\n";
    for (std::size_t i = 0; i < dm.size; ++i) {
        for (std::size_t j = 0; j < dm.size; ++j)
            out << (j ? "," : "") << format_double(dm.at(i, j));
        out << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<CoulombLevel>& levels,
                        const std::vector<bool>& winding_ok) {
    auto out = open_out(path);
    out << "n,r,E,winding_ok\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const bool ok = i < winding_ok.size() ? winding_ok[i] : false;
        out << levels[i].n << "," << format_double(levels[i].r) << ","
            << format_double(levels[i].E) << "," << (ok ? 1 : 0) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace clsim
