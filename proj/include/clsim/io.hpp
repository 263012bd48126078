#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "clsim/ensembles.hpp"
#include "clsim/frames.hpp"
#include "clsim/quantization.hpp"
#include "clsim/trajectories.hpp"

namespace clsim {

/// CSV conventions: UTF-8, comma separators, '#'-prefixed header comments.
/// Numbers are written with enough digits to round-trip doubles, so outputs
/// are bit-stable for a fixed config and seed.

/// Field snapshot: "# grid: dim,n,extent,hbar,mass" header, then one row per
/// point (index coordinates first, then the value), row-major.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

/// Raw dump: little-endian float64 array (row-major) plus a sidecar text
/// descriptor at <path>.txt.
void write_field_raw(const std::filesystem::path& path, const ScalarField& f);

/// Observation log: t, then the named columns. Caustic events append a
/// "# caustic t=... x=... value=..." comment line.
void write_log_csv(const std::filesystem::path& path, const ObservationLog& log,
                   const std::vector<std::string>& comments = {});

/// Summary: metric,value rows. Metric names are stable identifiers.
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, double>>& metrics);

/// Trajectories: traj_id, t, x.., aborted flag.
void write_trajectories_csv(const std::filesystem::path& path, const TrajectoryEnsemble& ens,
                            std::size_t max_members = 0);

/// Phase-space ensemble: weight, x.., p...
void write_phase_space_csv(const std::filesystem::path& path, const PhaseSpaceEnsemble& ens);

/// Density matrix with a basis descriptor header.
void write_density_matrix_csv(const std::filesystem::path& path, const DensityMatrix& dm,
                              const std::string& basis_descriptor);

/// Spectrum rows: n, r_n, E_n, winding_ok.
void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<CoulombLevel>& levels,
                        const std::vector<bool>& winding_ok);

std::string format_double(double x);

}  // namespace clsim
