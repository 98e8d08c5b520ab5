#pragma once

// Nehari-level descent for the discrete functional
//     E(x) = ½ xᵀA x − (1/p) Σ_k M_k a_k |x_k|^p
// over a closed convex cone, shared by the (r,θ) and (s,t) discretizations.

#include "egs/banded.hpp"
#include "egs/report.hpp"

#include <functional>
#include <span>
#include <vector>

namespace egs {

enum class LinearSolver { cholesky_pcg, jacobi_pcg };

struct DescentOptions {
    double tol = 1e-7;        ///< on the relative H¹ length of the projected fixed-point step
    int max_iter = 20000;
    double lambda_min = 1e-10;
    /// Called with every accepted iterate (after projection and rescaling).
    std::function<void(std::span<const double>, int)> on_iterate;
};

class ConeProblem {
public:
    using Projector = std::function<void(std::vector<double>&)>;

    ConeProblem(SymmetricBandedMatrix a, std::vector<double> mass, std::vector<double> weight,
                double p, Projector project, LinearSolver solver = LinearSolver::cholesky_pcg);

    std::size_t size() const { return mass_.size(); }
    double p() const { return p_; }
    const SymmetricBandedMatrix& matrix() const { return a_; }
    const std::vector<double>& mass() const { return mass_; }
    const std::vector<double>& weight() const { return weight_; }

    double norm2(std::span<const double> x) const { return a_.quadratic_form(x); }
    /// Σ M a |x|^p
    double nonlinear(std::span<const double> x) const;
    double energy(std::span<const double> x) const;
    /// E(y) − E(x), evaluated without cancellation between the two energies.
    double energy_difference(std::span<const double> x, std::span<const double> y) const;
    /// Euclidean gradient A x − M a |x|^{p−2} x.
    std::vector<double> gradient(std::span<const double> x) const;

    /// Solves A v = M f to a relative CG residual of 1e-10. Throws SolverFailure.
    std::vector<double> solve(std::span<const double> f, int* iterations = nullptr) const;
    /// Pointwise-invariance map B(x) = A⁻¹ M a |x|^{p−2} x.
    std::vector<double> invariance_map(std::span<const double> x, int* iterations = nullptr) const;
    /// t with t x on the Nehari set. Throws DegenerateDirection if Σ M a |x|^p = 0.
    double nehari_scale(std::span<const double> x) const;
    void project(std::vector<double>& x) const { project_(x); }

    struct Result {
        std::vector<double> x;
        SolveReport report;
    };
    /// Iterates x ← N(P(B x)) with energy acceptance and a backtracked
    /// fallback along x − λ(x − Bx). Throws Stagnation carrying the best iterate.
    Result descend(std::vector<double> x0, const DescentOptions& options) const;

private:
    SymmetricBandedMatrix a_;
    std::vector<double> mass_, weight_;
    double p_;
    Projector project_;
    LinearSolver solver_;
    BandedCholesky chol_;
};

}  // namespace egs
