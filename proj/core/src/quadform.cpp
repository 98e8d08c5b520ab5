#include "egs/quadform.hpp"

#include "egs/errors.hpp"
#include "egs/quadrature.hpp"
#include "egs/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace egs {

namespace {

double y_of(double t, int N, int m) {
    const double c = std::cos(t), s = std::sin(t);
    return (N - m) * c * c - m * s * s;
}

double dy_of(double t, int N) { return -N * std::sin(2.0 * t); }

/// ∫_0^{π/2} f by composite Gauss-Legendre on 256 panels.
template <class F>
double angular_integral(F&& f) {
    const int panels = 256;
    const double h = 0.5 * std::numbers::pi / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) s += integrate(f, k * h, (k + 1) * h, 8);
    return s;
}

}  // namespace

AngularProfile y_profile(int J, int N, int m) {
    if (J < 1) throw InvalidArgument("y_profile: J must be positive");
    if (N < 3 || m < 2 || m > N - 1) throw InvalidArgument("y_profile: need N >= 3, 2 <= m <= N-1");
    AngularProfile p;
    p.N = N;
    p.m = m;
    p.dtheta = 0.5 * std::numbers::pi / J;
    for (int j = 0; j < J; ++j) {
        const double t = (j + 0.5) * p.dtheta;
        p.theta.push_back(t);
        p.y.push_back(y_of(t, N, m));
        p.dy.push_back(dy_of(t, N));
        p.weight.push_back(mu(t, N, m) * p.dtheta);
    }
    return p;
}

double eta_ode_residual(const AngularProfile& pr) {
    const int J = static_cast<int>(pr.theta.size());
    if (J < 64) throw PreconditionError("eta_ode_residual: need at least 64 cells");
    auto flux = [&](int f) {
        const double t = f * pr.dtheta;
        return mu(t, pr.N, pr.m) * dy_of(t, pr.N);
    };
    double worst = 0.0, scale = 0.0;
    for (int j = 0; j < J; ++j) {
        const double div = (flux(j + 1) - flux(j)) / pr.dtheta;
        const double rhs = 2.0 * pr.N * mu(pr.theta[j], pr.N, pr.m) * pr.y[j];
        worst = std::max(worst, std::abs(-div - rhs));
        scale = std::max(scale, std::abs(rhs));
    }
    return worst / scale;
}

MomentChecks eta_moment_checks(const AngularProfile& pr) {
    const int J = static_cast<int>(pr.theta.size());
    double mean = 0.0, d2 = 0.0, y2 = 0.0;
    for (int j = 0; j < J; ++j) {
        const double a = j * pr.dtheta, b = (j + 1) * pr.dtheta;
        mean += integrate([&](double t) { return y_of(t, pr.N, pr.m) * mu(t, pr.N, pr.m); }, a, b, 2);
        d2 += integrate([&](double t) { return std::pow(dy_of(t, pr.N), 2) * mu(t, pr.N, pr.m); }, a, b, 2);
        y2 += integrate([&](double t) { return std::pow(y_of(t, pr.N, pr.m), 2) * mu(t, pr.N, pr.m); }, a, b, 2);
    }
    return {mean, d2 / y2};
}

bool suff_condition(int N, int m, double p, double R) {
    return p >= symmetry_breaking_exponent(N, R) && critical_exponent(N - m + 1) > p;
}

QuadFormReport quadratic_form(const RadialProfile& u, const ProblemSpec& spec, double lambda) {
    spec.validate();
    if (radial_nehari_residual(u, spec) > 1e-6) {
        throw PreconditionError("quadratic_form: u_rad is not converged (Nehari residual > 1e-6)");
    }
    const int N = spec.N, m = spec.m;
    const double p = spec.p;
    const auto s = radial_integrals(u.grid(), u.values(), spec.weight, p);
    QuadFormReport q;
    q.gradient = s.gradient;
    q.mass = s.mass;
    q.nonlinear = s.nonlinear;
    q.hardy = s.hardy;
    q.y2 = lambda * lambda * angular_integral([&](double t) { return std::pow(y_of(t, N, m), 2) * mu(t, N, m); });
    q.dy2 = lambda * lambda * angular_integral([&](double t) { return std::pow(dy_of(t, N), 2) * mu(t, N, m); });

    const double om = omega_constant(N, m);
    q.raw_value = om * ((s.gradient + s.mass - (p - 1.0) * s.nonlinear) * q.y2 + s.hardy * q.dy2);
    q.reduced_value = om * (-(p - 2.0) * (s.gradient + s.mass) + 2.0 * N * s.hardy) * q.y2;
    const double c = 0.5 * (N - 2.0);
    q.hardy_bound_value = om * (2.0 * N - (p - 2.0) * (c * c + spec.R * spec.R)) * s.hardy * q.y2;
    q.predicted_nonradial = q.raw_value < 0.0;
    q.suff_condition_holds = suff_condition(N, m, p, spec.R);
    return q;
}

PerturbationResult nehari_perturbation_test(const RadialProfile& u, const ProblemSpec& spec,
                                            std::span<const double> s_values, int J) {
    auto grid = Grid2D::make(u.grid(), J, spec.m);
    Discretization disc(spec, grid);
    const auto pr = y_profile(J, spec.N, spec.m);

    PerturbationResult out;
    out.radial_energy = disc.energy(radial_lift(u, grid));
    for (double s : s_values) {
        if (s < 0.0) throw InvalidArgument("nehari_perturbation_test: s must be >= 0 (cone constraint)");
        std::vector<double> ang(J);
        for (int j = 0; j < J; ++j) ang[j] = 1.0 + s * pr.y[j];
        const ConeField c = project_cone(Field::separable(grid, u.values(), ang));
        PerturbationPoint pt;
        pt.s = s;
        pt.t = disc.nehari_scale(c);
        pt.energy = disc.energy(c.scaled(pt.t));
        if (pt.energy < out.radial_energy) out.lowered = true;
        out.points.push_back(pt);
    }
    if (!out.lowered && quadratic_form(u, spec).predicted_nonradial) out.discretization_warning = true;
    return out;
}

}  // namespace egs
