#include "egs/radial.hpp"

#include "egs/descent.hpp"
#include "egs/errors.hpp"
#include "egs/log.hpp"
#include "egs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace egs {

RadialGrid::RadialGrid(int N, std::vector<double> nodes) : N_(N), nodes_(std::move(nodes)) {
    if (N_ < 3) throw InvalidArgument("RadialGrid: N must be >= 3");
    if (nodes_.size() < 3) throw InvalidArgument("RadialGrid: need at least 2 intervals");
    if (!(nodes_.front() > 0.0)) throw InvalidArgument("RadialGrid: R must be > 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("RadialGrid: nodes must increase");
    }
    const int M = intervals();
    face_weight_.resize(M);
    for (int i = 0; i < M; ++i) face_weight_[i] = power_integral(nodes_[i], nodes_[i + 1], N_ - 1);
    node_weight_.resize(M + 1);
    hardy_weight_.resize(M + 1);
    for (int i = 0; i <= M; ++i) {
        const double lo = i == 0 ? nodes_[0] : 0.5 * (nodes_[i - 1] + nodes_[i]);
        const double hi = i == M ? nodes_[M] : 0.5 * (nodes_[i] + nodes_[i + 1]);
        node_weight_[i] = power_integral(lo, hi, N_ - 1);
        hardy_weight_[i] = power_integral(lo, hi, N_ - 3);
    }
}

RadialGrid RadialGrid::uniform(int N, double R, double r_max, int M) {
    if (M < 2) throw InvalidArgument("RadialGrid: M must be >= 2");
    if (!(r_max > R)) throw InvalidArgument("RadialGrid: r_max must exceed R");
    std::vector<double> nodes(M + 1);
    const double h = (r_max - R) / M;
    for (int i = 0; i <= M; ++i) nodes[i] = R + h * i;
    nodes[M] = r_max;
    return RadialGrid(N, std::move(nodes));
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.intervals() + 1) {
        throw InvalidArgument("RadialProfile: size does not match grid");
    }
    if (values_.front() != 0.0 || values_.back() != 0.0) {
        throw InvalidArgument("RadialProfile: values must vanish at both ends");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("RadialProfile: values must be finite and nonnegative");
        }
    }
}

double RadialProfile::max() const { return *std::max_element(values_.begin(), values_.end()); }

RadialIntegrals radial_integrals(const RadialGrid& grid, std::span<const double> u,
                                 const WeightSpec& weight, double p) {
    RadialIntegrals out;
    const int M = grid.intervals();
    for (int i = 0; i < M; ++i) {
        const double d = u[i + 1] - u[i];
        out.gradient += grid.stiffness(i) * d * d;
    }
    for (int i = 0; i <= M; ++i) {
        const double v = u[i];
        const double w = grid.node_weight(i);
        out.mass += w * v * v;
        out.nonlinear += w * weight.radial(grid.node(i)) * std::pow(std::abs(v), p);
        out.hardy += grid.hardy_weight(i) * v * v;
    }
    return out;
}

double radial_energy(const RadialProfile& u, const ProblemSpec& spec) {
    const auto s = radial_integrals(u.grid(), u.values(), spec.weight, spec.p);
    return sphere_measure(spec.N - 1) * (0.5 * (s.gradient + s.mass) - s.nonlinear / spec.p);
}

double radial_nehari_residual(const RadialProfile& u, const ProblemSpec& spec) {
    const auto s = radial_integrals(u.grid(), u.values(), spec.weight, spec.p);
    const double norm2 = s.gradient + s.mass;
    if (norm2 == 0.0) return 0.0;
    return std::abs(norm2 - s.nonlinear) / norm2;
}

HardyCheck hardy_check(const RadialProfile& u, const ProblemSpec& spec) {
    if (u[0] != 0.0) throw PreconditionError("hardy_check: u must vanish at r = R");
    const auto s = radial_integrals(u.grid(), u.values(), WeightSpec::constant(1.0), 2.0);
    const double c = 2.0 / (spec.N - 2.0);
    HardyCheck h;
    h.lhs = s.hardy;
    h.rhs = c * c * s.gradient;
    h.ratio = h.rhs > 0.0 ? h.lhs / h.rhs : 0.0;
    return h;
}

// ---------------------------------------------------------------------------

namespace {

/// Res_i = (K u)_i + w_i u_i - w_i f_i(u_i) at interior nodes.
std::vector<double> weak_residual(const RadialGrid& grid, const Reaction& reaction,
                                  std::span<const double> u) {
    const int M = grid.intervals();
    std::vector<double> res(M + 1, 0.0);
    for (int i = 1; i < M; ++i) {
        const double flux = grid.stiffness(i - 1) * (u[i] - u[i - 1]) -
                            grid.stiffness(i) * (u[i + 1] - u[i]);
        res[i] = flux + grid.node_weight(i) * (u[i] - reaction.value(i, u[i]));
    }
    return res;
}

/// sqrt(Σ w_i (Res_i / w_i)^2)
double weighted_norm_of_weak(const RadialGrid& grid, const std::vector<double>& res) {
    double s = 0.0;
    for (int i = 1; i < grid.intervals(); ++i) s += res[i] * res[i] / grid.node_weight(i);
    return std::sqrt(s);
}

double weighted_norm(const RadialGrid& grid, std::span<const double> u) {
    double s = 0.0;
    for (int i = 0; i <= grid.intervals(); ++i) s += grid.node_weight(i) * u[i] * u[i];
    return std::sqrt(s);
}

/// Tridiagonal solve with partial pivoting (the Newton Jacobian is indefinite).
/// sub[i] couples (i, i-1), sup[i] couples (i, i+1).
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                                      std::vector<double> sup, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> sup2(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // rows i and i+1; candidate pivots diag[i] and sub[i+1]
        if (std::abs(sub[i + 1]) > std::abs(diag[i])) {
            std::swap(diag[i], sub[i + 1]);
            std::swap(sup[i], diag[i + 1]);
            std::swap(sup2[i], sup[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (diag[i] == 0.0) throw SolverFailure("tridiagonal solve: singular Jacobian", {});
        const double f = sub[i + 1] / diag[i];
        diag[i + 1] -= f * sup[i];
        if (i + 1 < n) sup[i + 1] -= f * sup2[i];
        rhs[i + 1] -= f * rhs[i];
        sub[i + 1] = 0.0;
    }
    if (diag[n - 1] == 0.0) throw SolverFailure("tridiagonal solve: singular Jacobian", {});
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        if (ii + 1 < n) s -= sup[ii] * x[ii + 1];
        if (ii + 2 < n) s -= sup2[ii] * x[ii + 2];
        x[ii] = s / diag[ii];
    }
    return x;
}

Reaction power_reaction(const RadialGrid& grid, const WeightSpec& weight, double p) {
    std::vector<double> a(grid.intervals() + 1);
    for (int i = 0; i <= grid.intervals(); ++i) a[i] = weight.radial(grid.node(i));
    auto shared = std::make_shared<std::vector<double>>(std::move(a));
    return Reaction{
        [shared, p](int i, double u) { return (*shared)[i] * std::pow(std::abs(u), p - 2.0) * u; },
        [shared, p](int i, double u) {
            return (p - 1.0) * (*shared)[i] * std::pow(std::abs(u), p - 2.0);
        }};
}

}  // namespace

std::vector<double> radial_residual(const RadialGrid& grid, const Reaction& reaction,
                                    std::span<const double> u) {
    auto res = weak_residual(grid, reaction, u);
    for (int i = 1; i < grid.intervals(); ++i) res[i] /= grid.node_weight(i);
    return res;
}

RadialSolution newton_radial(const RadialGrid& grid, const Reaction& reaction,
                             std::vector<double> u, const RadialSolverOptions& options) {
    const int M = grid.intervals();
    if (static_cast<int>(u.size()) != M + 1) throw InvalidArgument("newton_radial: size mismatch");
    u.front() = 0.0;
    u.back() = 0.0;

    RadialSolution out;
    auto res = weak_residual(grid, reaction, u);
    double rnorm = weighted_norm_of_weak(grid, res);
    auto relative = [&](double r) {
        const double un = weighted_norm(grid, u);
        return un > 0.0 ? r / un : r;
    };

    int it = 0;
    for (; it < options.max_newton; ++it) {
        if (relative(rnorm) <= options.tol) break;

        const int n = M - 1;
        std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), rhs(n);
        for (int k = 0; k < n; ++k) {
            const int i = k + 1;
            diag[k] = grid.stiffness(i - 1) + grid.stiffness(i) +
                      grid.node_weight(i) * (1.0 - reaction.derivative(i, u[i]));
            if (k > 0) sub[k] = -grid.stiffness(i - 1);
            if (k + 1 < n) sup[k] = -grid.stiffness(i);
            rhs[k] = -res[i];
        }
        const auto delta = solve_tridiagonal(std::move(sub), std::move(diag), std::move(sup),
                                             std::move(rhs));

        double step = 1.0;
        std::vector<double> trial(u.size());
        bool accepted = false;
        while (step >= options.min_step) {
            trial = u;
            for (int k = 0; k < n; ++k) trial[k + 1] += step * delta[k];
            auto tres = weak_residual(grid, reaction, trial);
            const double tnorm = weighted_norm_of_weak(grid, tres);
            if (std::isfinite(tnorm) && tnorm < rnorm) {
                u.swap(trial);
                res.swap(tres);
                rnorm = tnorm;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        std::ostringstream os;
        os << "radial newton it=" << it << " step=" << step << " residual=" << relative(rnorm);
        log::debug(os.str());
        if (!accepted) {
            throw NoConvergence("radial Newton: line search failed", u);
        }
    }
    out.report.iterations = it;
    out.report.residual_norm = relative(rnorm);
    out.report.converged = out.report.residual_norm <= options.tol;
    if (!out.report.converged) throw NoConvergence("radial Newton: iteration limit reached", u);
    out.values = std::move(u);
    return out;
}

std::vector<double> default_radial_guess(const RadialGrid& grid, const WeightSpec& weight, double p) {
    const int M = grid.intervals();
    const double R = grid.inner();
    std::vector<double> u(M + 1);
    for (int i = 0; i <= M; ++i) {
        const double x = grid.node(i) - R;
        u[i] = x * std::exp(-x);
    }
    u.back() = 0.0;
    const auto s = radial_integrals(grid, u, weight, p);
    if (!(s.nonlinear > 0.0)) throw DegenerateDirection("default guess: ∫ a u^p = 0");
    const double c = std::pow((s.gradient + s.mass) / s.nonlinear, 1.0 / (p - 2.0));
    for (double& v : u) v *= c;
    return u;
}

namespace {

/// Accepts a Newton result only if it is a genuinely positive solution.
std::optional<std::vector<double>> positive_part_if_valid(std::vector<double> u) {
    const double umax = *std::max_element(u.begin(), u.end());
    if (!(umax > 0.0)) return std::nullopt;
    for (double& v : u) {
        if (v < 0.0) {
            if (v < -1e-10 * umax) return std::nullopt;
            v = 0.0;
        }
    }
    return u;
}

/// Nehari-level descent on the discrete radial functional, clamped at zero.
/// Slower than Newton but converges from the default guess for every p,
/// so it supplies a starting point inside Newton's basin.
std::optional<std::vector<double>> descent_start(const RadialGrid& grid, const WeightSpec& weight,
                                                 double p, std::span<const double> start) {
    const int M = grid.intervals();
    const std::size_t n = M - 1;
    SymmetricBandedMatrix a(n, 1);
    std::vector<double> mass(n), w(n), x(n);
    for (int i = 1; i < M; ++i) {
        const std::size_t k = i - 1;
        a.at(k, k) = grid.stiffness(i - 1) + grid.stiffness(i) + grid.node_weight(i);
        if (k + 1 < n) a.at(k, k + 1) = -grid.stiffness(i);
        mass[k] = grid.node_weight(i);
        w[k] = weight.radial(grid.node(i));
        x[k] = std::max(start[i], 0.0);
    }
    ConeProblem problem(std::move(a), std::move(mass), std::move(w), p, [](std::vector<double>& v) {
        for (double& e : v) e = std::max(e, 0.0);
    });
    DescentOptions opt;
    opt.tol = 1e-6;
    opt.max_iter = 5000;
    try {
        auto res = problem.descend(std::move(x), opt);
        std::vector<double> u(M + 1, 0.0);
        std::copy(res.x.begin(), res.x.end(), u.begin() + 1);
        return u;
    } catch (const Error& e) {
        log::info(std::string("radial descent failed: ") + e.what());
        return std::nullopt;
    }
}

}  // namespace

std::pair<RadialProfile, SolveReport> solve_radial(const ProblemSpec& spec, const RadialGrid& grid,
                                                   std::optional<RadialProfile> init,
                                                   const RadialSolverOptions& options) {
    spec.validate();
    if (!spec.weight.is_radial()) throw PreconditionError("solve_radial: weight must be radial");
    if (grid.dimension() != spec.N) throw InvalidArgument("solve_radial: grid dimension != N");

    std::vector<double> start =
        init ? init->values() : default_radial_guess(grid, spec.weight, spec.p);
    if (init && static_cast<int>(start.size()) != grid.intervals() + 1) {
        throw InvalidArgument("solve_radial: initial profile lives on a different grid");
    }

    SolveReport report;
    std::optional<std::vector<double>> solution;
    try {
        auto sol = newton_radial(grid, power_reaction(grid, spec.weight, spec.p), start, options);
        report = sol.report;
        solution = positive_part_if_valid(std::move(sol.values));
        if (!solution) log::info("radial Newton converged to a non-positive solution");
    } catch (const NoConvergence& e) {
        log::info(std::string("radial cold start failed: ") + e.what());
    }

    if (!solution) {
        if (auto warm = descent_start(grid, spec.weight, spec.p, start)) {
            try {
                auto sol = newton_radial(grid, power_reaction(grid, spec.weight, spec.p), *warm, options);
                report = sol.report;
                solution = positive_part_if_valid(std::move(sol.values));
                if (solution) report.flags.push_back("descent-start");
            } catch (const NoConvergence& e) {
                log::info(std::string("radial Newton after descent failed: ") + e.what());
            }
        }
    }

    if (!solution && options.allow_continuation) {
        report.flags.push_back("continuation");
        int total_iterations = 0;
        double p = std::min(options.continuation_start, spec.p);
        std::vector<double> u = default_radial_guess(grid, spec.weight, p);
        std::vector<double> last = u;
        try {
            while (true) {
                auto sol = newton_radial(grid, power_reaction(grid, spec.weight, p), u, options);
                total_iterations += sol.report.iterations;
                auto pos = positive_part_if_valid(std::move(sol.values));
                if (!pos) throw NoConvergence("continuation lost positivity", u);
                u = *pos;
                report = sol.report;
                if (p == spec.p) break;
                p = std::min(p + options.continuation_step, spec.p);
            }
            solution = u;
            report.iterations = total_iterations;
        } catch (const NoConvergence& e) {
            throw NoConvergence(std::string("solve_radial: continuation failed: ") + e.what(),
                                e.last_iterate());
        }
    }
    if (!solution) throw NoConvergence("solve_radial: no positive solution found", start);

    RadialProfile profile(grid, std::move(*solution));
    report.flags.push_back("radial");
    report.energy = radial_energy(profile, spec);
    report.nehari_residual = radial_nehari_residual(profile, spec);
    report.converged = true;
    report.energy_history.push_back(report.energy);
    return {std::move(profile), report};
}

}  // namespace egs
