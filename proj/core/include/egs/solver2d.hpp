#pragma once

// Reduced 2D functional on [R, r_max] x [0, π/2] with measure ω μ(θ) r^{N-1},
// restricted to the cone of nonnegative, θ-nonincreasing fields.

#include "egs/descent.hpp"
#include "egs/grid2d.hpp"
#include "egs/report.hpp"

#include <functional>
#include <optional>

namespace egs {

/// The assembled discrete H¹ form A, mass M and weight samples for one (spec, grid).
class Discretization {
public:
    Discretization(const ProblemSpec& spec, GridPtr grid,
                   LinearSolver solver = LinearSolver::cholesky_pcg);

    const ProblemSpec& spec() const { return spec_; }
    const GridPtr& grid() const { return grid_; }
    const ConeProblem& problem() const { return problem_; }

    double energy(const Field& u) const;
    double h1_norm2(const Field& u) const;
    /// Σ M a |u|^p
    double nonlinear(const Field& u) const;
    /// Euclidean gradient of energy() with respect to the interior nodal values.
    Field gradient(const Field& u) const;
    /// v with A v = M rhs.
    Field linear_solve(const Field& rhs, int* iterations = nullptr) const;
    double nehari_scale(const Field& u) const;

private:
    ProblemSpec spec_;
    GridPtr grid_;
    ConeProblem problem_;
};

/// Discrete energy, evaluated term by term from the grid quadrature (not via A).
double energy(const Field& u, const ProblemSpec& spec);

/// v solving A v = M rhs; relative CG residual <= 1e-10. Throws SolverFailure.
Field linear_solve(const Field& rhs, const ProblemSpec& spec,
                   LinearSolver solver = LinearSolver::cholesky_pcg);

/// (‖u‖²/∫a|u|^p)^{1/(p-2)}. Throws DegenerateDirection when ∫a|u|^p = 0.
double nehari_scale(const Field& u, const ProblemSpec& spec);

/// Row-wise μ-weighted isotonic regression followed by clamping at 0.
ConeField project_cone(const Field& u);

/// θ-constant field u(r_i, θ_j) = u_rad(r_i).
Field radial_lift(const RadialProfile& profile, const GridPtr& grid);

/// project_cone(u_rad (1 + ε 𝔶(θ))), with u_rad solved on the grid's radial nodes.
ConeField default_init(const ProblemSpec& spec, const GridPtr& grid, double epsilon = 0.3);

struct GroundStateOptions {
    double tol = 1e-7;
    int max_iter = 20000;
    double lambda_min = 1e-10;
    double epsilon = 0.3;
    LinearSolver solver = LinearSolver::cholesky_pcg;
    /// Called with every accepted iterate.
    std::function<void(const ConeField&, int)> on_iterate;
};

/// Nehari-level descent in the cone. Throws Stagnation (with the best iterate
/// as full nodal values) when no energy decrease can be found.
std::pair<ConeField, SolveReport> ground_state(const ProblemSpec& spec, const GridPtr& grid,
                                               std::optional<ConeField> init = std::nullopt,
                                               const GroundStateOptions& options = {});

/// max |u_ij − ū_i| / max |u_ij| with ū_i the μ-weighted θ-mean. Throws on u ≡ 0.
double symmetry_metric(const Field& u);

struct TailBound {
    double lhs = 0.0;  ///< ‖u‖^q_{L^q} over θ ∈ [(1 − 1/k)π/2, π/2]
    double rhs = 0.0;  ///< ‖u‖^q_{L^q} / (c_{N,m}(k − 2) + 1)
    bool passed = false;
};

/// Angular tail inequality for an even k >= 2 and q in [2, 2*_{N-m+1}).
TailBound tail_bound_check(const ConeField& u, int k, double q, double tol = 1e-12);

struct PsIdentity {
    double value = 0.0;     ///< J(u) + α G(u, βu)
    double expected = 0.0;  ///< (p − β − 1)/(2p) ‖u‖²
    double deviation = 0.0;
    double norm2 = 0.0;
};

/// Palais-Smale identity with the discrete Ψ, Φ and G; β ∈ (1, p − 1).
PsIdentity ps_identity_check(const ConeField& u, double beta, const ProblemSpec& spec);

}  // namespace egs
