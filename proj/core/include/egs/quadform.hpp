#pragma once

// Second variation of the energy at the radial solution in the direction
// v = u_rad 𝔶(θ), with 𝔶(θ) = (N−m)cos²θ − m sin²θ.

#include "egs/radial.hpp"

#include <span>
#include <vector>

namespace egs {

struct AngularProfile {
    int N = 0, m = 0;
    double dtheta = 0.0;
    std::vector<double> theta;   ///< cell centres
    std::vector<double> y;       ///< 𝔶(θ_j)
    std::vector<double> dy;      ///< 𝔶′(θ_j) = −N sin 2θ_j
    std::vector<double> weight;  ///< μ(θ_j) Δθ
};

/// 𝔶 on J cell-centred nodes of (0, π/2).
AngularProfile y_profile(int J, int N, int m);

/// max_j |−(μ𝔶′)′_j − 2N μ_j 𝔶_j| / max_j |2N μ_j 𝔶_j|, with (μ𝔶′)′ differenced
/// from exact face values. Requires at least 64 cells.
double eta_ode_residual(const AngularProfile& profile);

struct MomentChecks {
    double mean = 0.0;   ///< ∫ 𝔶 μ dθ
    double ratio = 0.0;  ///< ∫ 𝔶′² μ / ∫ 𝔶² μ
};

/// Moments by two-point Gauss quadrature on each cell of the profile.
MomentChecks eta_moment_checks(const AngularProfile& profile);

struct QuadFormReport {
    double raw_value = 0.0;
    double reduced_value = 0.0;
    double hardy_bound_value = 0.0;
    bool predicted_nonradial = false;
    bool suff_condition_holds = false;
    /// Radial integrals (without sphere constants) entering the values above.
    double gradient = 0.0, mass = 0.0, nonlinear = 0.0, hardy = 0.0;
    double y2 = 0.0, dy2 = 0.0;  ///< ∫𝔶²μ, ∫𝔶′²μ
};

/// I″(u_rad)(λv, λv) in raw and reduced form. Throws PreconditionError if
/// the Nehari residual of u_rad exceeds 1e−6.
QuadFormReport quadratic_form(const RadialProfile& u_rad, const ProblemSpec& spec, double lambda = 1.0);

/// 2 + 2N/(((N−2)/2)² + R²) <= p < 2*_{N−m+1}
bool suff_condition(int N, int m, double p, double R);

struct PerturbationPoint {
    double s = 0.0;
    double t = 0.0;       ///< Nehari factor of P(u + s v)
    double energy = 0.0;  ///< I(t P(u + s v))
};

struct PerturbationResult {
    double radial_energy = 0.0;  ///< I(u_rad) on the same 2D grid
    std::vector<PerturbationPoint> points;
    bool lowered = false;                 ///< some energy strictly below radial_energy
    bool discretization_warning = false;  ///< predicted nonradial but never lowered
};

/// Energies along u*_s = t(s) P(u_rad + s u_rad 𝔶) on a grid with the
/// profile's radial nodes and J angular cells.
PerturbationResult nehari_perturbation_test(const RadialProfile& u_rad, const ProblemSpec& spec,
                                            std::span<const double> s_values, int J = 64);

}  // namespace egs
