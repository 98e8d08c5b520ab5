#include "egs/solver2d.hpp"

#include "egs/errors.hpp"
#include "egs/isotonic.hpp"
#include "egs/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace egs {

namespace {

void check_compatible(const ProblemSpec& spec, const Grid2D& g) {
    if (g.N() != spec.N || g.m() != spec.m) throw InvalidArgument("grid (N, m) does not match spec");
    if (std::abs(g.radial().inner() - spec.R) > 1e-12 * spec.R) {
        throw InvalidArgument("grid inner radius does not match spec.R");
    }
}

SymmetricBandedMatrix assemble(const Grid2D& g) {
    const int M = g.M(), J = g.J();
    const double om = g.omega();
    const auto& rg = g.radial();
    SymmetricBandedMatrix A(g.interior_size(), static_cast<std::size_t>(J));
    auto k = [&](int i, int j) { return static_cast<std::size_t>(i - 1) * J + j; };

    // radial differences across the faces (r_i, r_{i+1})
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < J; ++j) {
            const double c = om * g.cell_weight(j) * rg.stiffness(i);
            const bool lo = i >= 1, hi = i + 1 <= M - 1;
            if (lo) A.at(k(i, j), k(i, j)) += c;
            if (hi) A.at(k(i + 1, j), k(i + 1, j)) += c;
            if (lo && hi) A.at(k(i, j), k(i + 1, j)) -= c;
        }
    }
    // angular differences across interior θ faces, weighted by the u²/r² measure
    for (int i = 1; i < M; ++i) {
        for (int f = 1; f < J; ++f) {
            const double c = om * rg.hardy_weight(i) * g.face_mu(f) / g.dtheta();
            A.at(k(i, f - 1), k(i, f - 1)) += c;
            A.at(k(i, f), k(i, f)) += c;
            A.at(k(i, f - 1), k(i, f)) -= c;
        }
        for (int j = 0; j < J; ++j) A.at(k(i, j), k(i, j)) += om * rg.node_weight(i) * g.cell_weight(j);
    }
    return A;
}

std::vector<double> mass_vector(const Grid2D& g) {
    std::vector<double> m(g.interior_size());
    for (int i = 1; i < g.M(); ++i) {
        for (int j = 0; j < g.J(); ++j) {
            m[static_cast<std::size_t>(i - 1) * g.J() + j] =
                g.omega() * g.radial().node_weight(i) * g.cell_weight(j);
        }
    }
    return m;
}

std::vector<double> weight_vector(const Grid2D& g, const WeightSpec& w) {
    std::vector<double> thetas(g.J());
    for (int j = 0; j < g.J(); ++j) thetas[j] = g.theta(j);
    w.validate(g.radial().nodes(), thetas);
    std::vector<double> a(g.interior_size());
    for (int i = 1; i < g.M(); ++i) {
        for (int j = 0; j < g.J(); ++j) {
            a[static_cast<std::size_t>(i - 1) * g.J() + j] = w(g.radial().node(i), g.theta(j));
        }
    }
    return a;
}

ConeProblem::Projector row_projector(const GridPtr& grid) {
    std::vector<double> q(grid->J());
    for (int j = 0; j < grid->J(); ++j) q[j] = grid->cell_weight(j);
    return [q, J = std::size_t(grid->J())](std::vector<double>& x) {
        for (std::size_t s = 0; s + J <= x.size(); s += J) {
            project_monotone_cone(std::span<double>(x.data() + s, J), q);
        }
    };
}

/// Radial stand-in for the weight, used only to build initial guesses.
WeightSpec radial_surrogate(const WeightSpec& w) {
    if (w.is_radial()) return w;
    const auto& sep = std::get<SeparableWeight>(w.kind());
    double mean = 0.0;
    for (const auto& [t, f] : sep.theta_table) mean += f;
    mean /= static_cast<double>(sep.theta_table.size());
    return WeightSpec(RadialExponentialWeight{sep.radial.c0 * mean, sep.radial.c1 * mean});
}

double y_of(double theta, int N, int m) {
    const double c = std::cos(theta), s = std::sin(theta);
    return (N - m) * c * c - m * s * s;
}

}  // namespace

// ---------------------------------------------------------------------------

Discretization::Discretization(const ProblemSpec& spec, GridPtr grid, LinearSolver solver)
    : spec_(spec), grid_(std::move(grid)),
      problem_((check_compatible(spec, *grid_), assemble(*grid_)), mass_vector(*grid_),
               weight_vector(*grid_, spec.weight), spec.p, row_projector(grid_), solver) {
    spec_.validate();
    if (!spec_.domain.is_ball()) {
        throw PreconditionError("the (r, θ) discretization requires an exterior-ball domain");
    }
}

double Discretization::energy(const Field& u) const { return problem_.energy(u.interior()); }
double Discretization::h1_norm2(const Field& u) const { return problem_.norm2(u.interior()); }
double Discretization::nonlinear(const Field& u) const { return problem_.nonlinear(u.interior()); }

Field Discretization::gradient(const Field& u) const {
    return Field::from_interior(grid_, problem_.gradient(u.interior()));
}

Field Discretization::linear_solve(const Field& rhs, int* iterations) const {
    return Field::from_interior(grid_, problem_.solve(rhs.interior(), iterations));
}

double Discretization::nehari_scale(const Field& u) const { return problem_.nehari_scale(u.interior()); }

// ---------------------------------------------------------------------------

double energy(const Field& u, const ProblemSpec& spec) {
    const auto& g = u.grid();
    check_compatible(spec, g);
    const auto& rg = g.radial();
    const int M = g.M(), J = g.J();
    double grad_r = 0.0, grad_t = 0.0, mass = 0.0, nl = 0.0;
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < J; ++j) {
            const double d = u(i + 1, j) - u(i, j);
            grad_r += rg.stiffness(i) * g.cell_weight(j) * d * d;
        }
    }
    for (int i = 0; i <= M; ++i) {
        for (int f = 1; f < J; ++f) {
            const double d = u(i, f) - u(i, f - 1);
            grad_t += rg.hardy_weight(i) * g.face_mu(f) * d * d / g.dtheta();
        }
        for (int j = 0; j < J; ++j) {
            const double v = u(i, j);
            const double w = rg.node_weight(i) * g.cell_weight(j);
            mass += w * v * v;
            nl += w * spec.weight(rg.node(i), g.theta(j)) * std::pow(std::abs(v), spec.p);
        }
    }
    return g.omega() * (0.5 * (grad_r + grad_t + mass) - nl / spec.p);
}

Field linear_solve(const Field& rhs, const ProblemSpec& spec, LinearSolver solver) {
    for (double v : rhs.values()) {
        if (!std::isfinite(v)) throw InvalidArgument("linear_solve: non-finite right-hand side");
    }
    return Discretization(spec, rhs.grid_ptr(), solver).linear_solve(rhs);
}

double nehari_scale(const Field& u, const ProblemSpec& spec) {
    return Discretization(spec, u.grid_ptr()).nehari_scale(u);
}

ConeField project_cone(const Field& u) {
    Field out = u;
    const auto& g = u.grid();
    std::vector<double> q(g.J());
    for (int j = 0; j < g.J(); ++j) q[j] = g.cell_weight(j);
    for (int i = 0; i <= g.M(); ++i) project_monotone_cone(out.row(i), q);
    return ConeField::certify(std::move(out));
}

Field radial_lift(const RadialProfile& profile, const GridPtr& grid) {
    if (profile.grid().nodes() != grid->radial().nodes()) {
        throw InvalidArgument("radial_lift: profile and grid use different radial nodes");
    }
    std::vector<double> ones(grid->J(), 1.0);
    return Field::separable(grid, profile.values(), ones);
}

ConeField default_init(const ProblemSpec& spec, const GridPtr& grid, double epsilon) {
    ProblemSpec rspec = spec;
    rspec.weight = radial_surrogate(spec.weight);
    rspec.r_max = grid->radial().outer();
    auto [profile, rep] = solve_radial(rspec, grid->radial());
    std::vector<double> ang(grid->J());
    for (int j = 0; j < grid->J(); ++j) ang[j] = 1.0 + epsilon * y_of(grid->theta(j), spec.N, spec.m);
    return project_cone(Field::separable(grid, profile.values(), ang));
}

std::pair<ConeField, SolveReport> ground_state(const ProblemSpec& spec, const GridPtr& grid,
                                               std::optional<ConeField> init,
                                               const GroundStateOptions& options) {
    spec.validate_for_2d();
    Discretization disc(spec, grid, options.solver);
    if (!init) init = default_init(spec, grid, options.epsilon);
    if (!(disc.nonlinear(init->field()) > 0.0)) {
        throw DegenerateDirection("ground_state: ∫ a|init|^p vanishes");
    }

    DescentOptions dopt;
    dopt.tol = options.tol;
    dopt.max_iter = options.max_iter;
    dopt.lambda_min = options.lambda_min;
    if (options.on_iterate) {
        dopt.on_iterate = [&](std::span<const double> x, int it) {
            options.on_iterate(ConeField::certify(Field::from_interior(grid, x)), it);
        };
    }

    ConeProblem::Result res;
    try {
        res = disc.problem().descend(init->field().interior(), dopt);
    } catch (const Stagnation& e) {
        throw Stagnation(e.what(), Field::from_interior(grid, e.last_iterate()).values());
    }

    ConeField u = ConeField::certify(Field::from_interior(grid, res.x));
    SolveReport rep = std::move(res.report);
    rep.symmetry_metric = symmetry_metric(u);
    for (int k : {4, 8, 16}) {
        const auto tb = tail_bound_check(u, k, spec.p);
        rep.tail_bounds[k] = {tb.lhs, tb.rhs};
        if (!tb.passed) rep.flags.push_back("tail-bound-violated");
    }
    std::ostringstream os;
    os << "ground_state N=" << spec.N << " m=" << spec.m << " p=" << spec.p << " R=" << spec.R
       << ": energy=" << rep.energy << " metric=" << rep.symmetry_metric << " iterations=" << rep.iterations
       << (rep.converged ? "" : " (not converged)");
    log::info(os.str());
    return {std::move(u), std::move(rep)};
}

double symmetry_metric(const Field& u) {
    const double umax = u.max_abs();
    if (umax == 0.0) throw InvalidArgument("symmetry_metric: field vanishes identically");
    const auto& g = u.grid();
    double qsum = 0.0;
    for (int j = 0; j < g.J(); ++j) qsum += g.cell_weight(j);
    double worst = 0.0;
    for (int i = 0; i <= g.M(); ++i) {
        double mean = 0.0;
        for (int j = 0; j < g.J(); ++j) mean += g.cell_weight(j) * u(i, j);
        mean /= qsum;
        for (int j = 0; j < g.J(); ++j) worst = std::max(worst, std::abs(u(i, j) - mean));
    }
    return worst / umax;
}

TailBound tail_bound_check(const ConeField& cu, int k, double q, double tol) {
    const Field& u = cu.field();
    const auto& g = u.grid();
    if (k < 2 || k % 2 != 0) throw InvalidArgument("tail_bound_check: k must be an even integer >= 2");
    const ExtendedReal crit = critical_exponent(g.N() - g.m() + 1);
    if (!(q >= 2.0) || !(crit > q)) throw InvalidArgument("tail_bound_check: q outside [2, 2*_{N-m+1})");

    const double lo = (1.0 - 1.0 / k) * 0.5 * std::numbers::pi, hi = 0.5 * std::numbers::pi;
    double tail = 0.0, total = 0.0;
    for (int i = 0; i <= g.M(); ++i) {
        const double w = g.radial().node_weight(i);
        for (int j = 0; j < g.J(); ++j) {
            const double v = std::pow(std::abs(u(i, j)), q) * w;
            total += v * g.omega() * g.cell_weight(j);
            tail += v * g.sector_weight(j, lo, hi);
        }
    }
    const double c = std::pow(2.0, (g.N() - g.m() - 3) / 2.0);
    TailBound out;
    out.lhs = tail;
    out.rhs = total / (c * (k - 2) + 1.0);
    out.passed = out.lhs <= out.rhs * (1.0 + tol);
    return out;
}

PsIdentity ps_identity_check(const ConeField& u, double beta, const ProblemSpec& spec) {
    const double p = spec.p;
    if (!(beta > 1.0 && beta < p - 1.0)) throw InvalidArgument("ps_identity_check: β must lie in (1, p − 1)");
    Discretization disc(spec, u.field().grid_ptr());
    const auto& pr = disc.problem();
    const auto x = u.field().interior();
    std::vector<double> bx(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) bx[k] = beta * x[k];

    // Ψ is finite on both arguments: u is certified in the cone and so is βu.
    const double psi_u = 0.5 * pr.norm2(x);
    const double psi_bu = 0.5 * pr.norm2(bx);
    const double phi_u = pr.nonlinear(x) / p;
    double dphi = 0.0;  // Φ'(u)(u − βu)
    for (std::size_t k = 0; k < x.size(); ++k) {
        dphi += pr.mass()[k] * pr.weight()[k] * std::pow(std::abs(x[k]), p - 2.0) * x[k] * (x[k] - bx[k]);
    }
    const double G = psi_u - psi_bu - dphi;
    const double alpha = 1.0 / (p * (beta - 1.0));

    PsIdentity out;
    out.norm2 = 2.0 * psi_u;
    out.value = psi_u - phi_u + alpha * G;
    out.expected = (p - beta - 1.0) / (2.0 * p) * out.norm2;
    out.deviation = std::abs(out.value - out.expected);
    return out;
}

}  // namespace egs
