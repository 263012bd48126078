#pragma once

#include "clsim/frames.hpp"
#include "clsim/potential.hpp"
#include "clsim/rng.hpp"

namespace clsim {

/// Orthonormal family of non-negative amplitudes with pairwise disjoint
/// supports (the preferred basis in which position mixtures are diagonal).
/// Disjointness is structural: the constructor rejects members whose
/// pointwise products exceed the tolerance, so off-diagonal overlap matrix
/// elements vanish identically rather than approximately.
class PositiveBasis {
public:
    PositiveBasis(std::vector<ScalarField> members, double overlap_tol = 1e-12);

    std::size_t size() const { return members_.size(); }
    const ScalarField& member(std::size_t i) const { return members_[i]; }
    const Grid& grid() const { return members_.front().grid; }

    /// n equally spaced, equally shaped C^3 bumps spanning the domain.
    static PositiveBasis bumps(const Grid& g, std::size_t n);

private:
    std::vector<ScalarField> members_;
};

/// Dense symmetric density matrix over a PositiveBasis (members <= 64).
struct DensityMatrix {
    std::vector<double> m;  // row-major size x size
    std::size_t size = 0;

    double& at(std::size_t i, std::size_t j) { return m[i * size + j]; }
    double at(std::size_t i, std::size_t j) const { return m[i * size + j]; }
    double trace() const;
};

/// Rank-one projector onto sum_i sqrt(w_i) |R_i>: entries sqrt(w_i w_j).
DensityMatrix pure_density(const std::vector<double>& weights);
/// Statistical mixture: diag(w).
DensityMatrix mixed_density(const std::vector<double>& weights);

/// Expectation of a diagonal-in-position observable A(x):
/// tr(rho A) with A_ij = integral R_i A R_j. For disjoint supports A is
/// diagonal, so pure and mixed states with the same weights agree.
double expect_diagonal(const DensityMatrix& rho, const PositiveBasis& basis,
                       const ScalarField& A);

/// Matrix elements A_ij = integral R_i A R_j (dense, for invariants).
DensityMatrix observable_matrix(const PositiveBasis& basis, const ScalarField& A);

/// Eigenvalues of a small symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(const DensityMatrix& m);

struct ExchangeReport {
    double overlap = 0.0;        // integral R1 R2
    double exchange_weight = 0.0;  // 2 * overlap^2, the cross term's total mass
    double direct_weight = 0.0;    // norm(R1^2) * norm(R2^2) terms, = 2 for unit states
};

/// Two-point exchange structure of the symmetrized pure state built from R1
/// and R2: rho(x,y) contains 2 R1R2(x) R1R2(y). For disjoint supports the
/// exchange weight vanishes identically; above tol it throws (the classical
/// reading requires strictly non-overlapping supports).
ExchangeReport exchange_density(const ScalarField& R1, const ScalarField& R2, double tol = 1e-12);

/// Residuals of the mean-motion identities over a frame sequence:
///   r1(t) = | d<x>/dt - <v>_rho |
///   r2(t) = | m d^2<x>/dt^2 - <-grad V>_rho |
/// by centered differences on the (uniform) frame times; the first and last
/// frames have no centered stencil and are skipped. Returns per-frame maxima
/// over axes.
struct EhrenfestResiduals {
    std::vector<double> times;
    std::vector<double> r1;
    std::vector<double> r2;
    double max_r1() const;
    double max_r2() const;
};
EhrenfestResiduals ehrenfest_residuals(const DensityFrames& density, const VelocityFrames& velocity,
                                       const Potential& pot);

struct PhaseSpacePoint {
    std::array<double, 2> x{};
    std::array<double, 2> p{};
    double weight = 1.0;
};

struct PhaseSpaceEnsemble {
    Grid grid;
    std::vector<PhaseSpacePoint> points;
};

/// w(x,p) = R^2(x) delta(p - grad S): positions sampled from R^2, momenta
/// placed exactly on the flow, p = grad S at the sample (4-point Lagrange
/// interpolation of the gridded gradient).
PhaseSpaceEnsemble phase_space_from_pure(const PolarPair& state, std::size_t n, std::uint64_t seed);

/// Momentum-agnostic ensemble from an amplitude alone: positions from R^2,
/// momenta uniform in the box [-p_box, p_box]^dim (the delta over momenta is
/// not grid-representable; the box is the declared truncation).
PhaseSpaceEnsemble phase_space_from_R(const ScalarField& R, double p_box, std::size_t n,
                                      std::uint64_t seed);

/// Weighted ensemble average of O(x, p).
double phase_space_average(const PhaseSpaceEnsemble& ens,
                           const std::function<double(std::array<double, 2>, std::array<double, 2>)>& O);

/// Advance every point through dx/dt = p/m, dp/dt = -grad V (RK4, analytic
/// potential gradient). Positions wrap on the periodic domain.
void evolve_phase_space(PhaseSpaceEnsemble& ens, const Potential& pot, double t0, double t1,
                        double dt);

/// L1 distance between the position marginal of the ensemble and a density
/// field, both binned to `bins`.
double phase_space_position_l1(const PhaseSpaceEnsemble& ens, const ScalarField& rho,
                               std::size_t bins = 64);

}  // namespace clsim
