#pragma once

// Radial solutions of -u'' - (N-1)u'/r + u = a(r) u^{p-1} on [R, r_max] with
// homogeneous Dirichlet ends, discretized in divergence form so that the
// discrete operator is the exact gradient of the discrete energy.

#include "egs/geometry.hpp"
#include "egs/report.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace egs {

class RadialGrid {
public:
    /// Strictly increasing nodes r_0 = R < ... < r_M = r_max.
    RadialGrid(int N, std::vector<double> nodes);
    static RadialGrid uniform(int N, double R, double r_max, int M);

    int dimension() const { return N_; }
    int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
    double inner() const { return nodes_.front(); }
    double outer() const { return nodes_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int i) const { return nodes_[i]; }
    double spacing(int i) const { return nodes_[i + 1] - nodes_[i]; }  ///< h_{i+1/2}

    /// ∫_{r_i}^{r_{i+1}} r^{N-1} dr
    double face_weight(int i) const { return face_weight_[i]; }
    /// ∫ r^{N-1} dr over the dual cell of node i
    double node_weight(int i) const { return node_weight_[i]; }
    /// ∫ r^{N-3} dr over the dual cell of node i (measure for u^2/r^2)
    double hardy_weight(int i) const { return hardy_weight_[i]; }

    /// Stiffness coefficient F_{i+1/2} / h_{i+1/2}^2.
    double stiffness(int i) const { return face_weight_[i] / (spacing(i) * spacing(i)); }

private:
    int N_;
    std::vector<double> nodes_;
    std::vector<double> face_weight_, node_weight_, hardy_weight_;
};

/// Nodal values of a nonnegative radial function vanishing at both ends.
class RadialProfile {
public:
    RadialProfile(RadialGrid grid, std::vector<double> values);

    const RadialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    double max() const;

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

/// Discrete integrals (without the sphere constant).
struct RadialIntegrals {
    double gradient = 0.0;   ///< ∫ u'^2 r^{N-1}
    double mass = 0.0;       ///< ∫ u^2 r^{N-1}
    double nonlinear = 0.0;  ///< ∫ a |u|^p r^{N-1}
    double hardy = 0.0;      ///< ∫ u^2 r^{N-3}
};

RadialIntegrals radial_integrals(const RadialGrid& grid, std::span<const double> u,
                                 const WeightSpec& weight, double p);

/// I(u) for the radial lift: ω_{N-1} Σ [½(u'^2 + u^2) - a|u|^p / p].
double radial_energy(const RadialProfile& u, const ProblemSpec& spec);

/// Pointwise reaction f_i(u) and its derivative, for the equation
/// -Δ_r u + u = f(r_i, u).
struct Reaction {
    std::function<double(int, double)> value;
    std::function<double(int, double)> derivative;
};

struct RadialSolverOptions {
    double tol = 1e-10;          ///< relative weighted strong residual
    int max_newton = 100;
    double min_step = 1e-10;
    double continuation_start = 2.5;
    double continuation_step = 0.5;
    bool allow_continuation = true;
};

struct RadialSolution {
    std::vector<double> values;
    SolveReport report;
};

/// Damped Newton for the discrete equation with the given reaction. Throws
/// NoConvergence carrying the last iterate.
RadialSolution newton_radial(const RadialGrid& grid, const Reaction& reaction,
                             std::vector<double> init, const RadialSolverOptions& options = {});

/// Discrete strong residual -Δ_r u + u - f(u) at interior nodes (zero at the ends).
std::vector<double> radial_residual(const RadialGrid& grid, const Reaction& reaction,
                                    std::span<const double> u);

/// c (r-R) e^{-(r-R)}, with c placing the guess on the Nehari set.
std::vector<double> default_radial_guess(const RadialGrid& grid, const WeightSpec& weight, double p);

/// Positive radial solution of the problem. When the cold Newton start fails,
/// Newton is restarted from a Nehari-descent iterate ("descent-start" flag),
/// and as a last resort continuation in p is used ("continuation" flag).
std::pair<RadialProfile, SolveReport> solve_radial(const ProblemSpec& spec, const RadialGrid& grid,
                                                   std::optional<RadialProfile> init = std::nullopt,
                                                   const RadialSolverOptions& options = {});

/// Nehari residual |‖u‖² - ∫ a u^p| / ‖u‖² of a radial profile.
double radial_nehari_residual(const RadialProfile& u, const ProblemSpec& spec);

struct HardyCheck {
    double lhs = 0.0;    ///< ∫ u^2/r^2 r^{N-1}
    double rhs = 0.0;    ///< (2/(N-2))^2 ∫ u'^2 r^{N-1}
    double ratio = 0.0;  ///< lhs / rhs, reported as 0 when rhs = 0
};

HardyCheck hardy_check(const RadialProfile& u, const ProblemSpec& spec);

}  // namespace egs
