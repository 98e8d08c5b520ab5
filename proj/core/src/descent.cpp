#include "egs/descent.hpp"

#include "egs/errors.hpp"
#include "egs/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace egs {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// |b|^p − |a|^p with relative accuracy when a ≈ b.
double pow_difference(double a, double b, double p) {
    a = std::abs(a);
    b = std::abs(b);
    if (a == 0.0) return std::pow(b, p);
    if (b == 0.0) return -std::pow(a, p);
    return std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a));
}

}  // namespace

ConeProblem::ConeProblem(SymmetricBandedMatrix a, std::vector<double> mass, std::vector<double> weight,
                         double p, Projector project, LinearSolver solver)
    : a_(std::move(a)), mass_(std::move(mass)), weight_(std::move(weight)), p_(p),
      project_(std::move(project)), solver_(solver) {
    if (mass_.size() != a_.size() || weight_.size() != a_.size()) {
        throw InvalidArgument("ConeProblem: size mismatch");
    }
    if (!(p_ > 2.0)) throw InvalidArgument("ConeProblem: p must exceed 2");
    if (solver_ == LinearSolver::cholesky_pcg) chol_ = BandedCholesky(a_);
}

double ConeProblem::nonlinear(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += mass_[k] * weight_[k] * std::pow(std::abs(x[k]), p_);
    return s;
}

double ConeProblem::energy(std::span<const double> x) const {
    return 0.5 * norm2(x) - nonlinear(x) / p_;
}

double ConeProblem::energy_difference(std::span<const double> x, std::span<const double> y) const {
    const std::size_t n = x.size();
    std::vector<double> d(n), s(n), as(n);
    for (std::size_t k = 0; k < n; ++k) {
        d[k] = y[k] - x[k];
        s[k] = y[k] + x[k];
    }
    a_.multiply(s, as);
    double nl = 0.0;
    for (std::size_t k = 0; k < n; ++k) nl += mass_[k] * weight_[k] * pow_difference(x[k], y[k], p_);
    return 0.5 * dot(d, as) - nl / p_;
}

std::vector<double> ConeProblem::gradient(std::span<const double> x) const {
    std::vector<double> g(x.size());
    a_.multiply(x, g);
    for (std::size_t k = 0; k < x.size(); ++k) {
        g[k] -= mass_[k] * weight_[k] * std::pow(std::abs(x[k]), p_ - 2.0) * x[k];
    }
    return g;
}

std::vector<double> ConeProblem::solve(std::span<const double> f, int* iterations) const {
    std::vector<double> b(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) b[k] = mass_[k] * f[k];
    const Preconditioner pre =
        solver_ == LinearSolver::cholesky_pcg ? cholesky_preconditioner(chol_) : jacobi_preconditioner(a_);
    // Starting from the preconditioned right-hand side saves the first CG step
    // when the preconditioner is the exact factorization.
    std::vector<double> x0(b.size(), 0.0);
    if (solver_ == LinearSolver::cholesky_pcg) {
        x0 = b;
        chol_.solve_in_place(x0);
    }
    auto res = conjugate_gradient(a_, b, pre, 1e-10, 2000, x0);
    if (iterations) *iterations = res.iterations;
    return std::move(res.x);
}

std::vector<double> ConeProblem::invariance_map(std::span<const double> x, int* iterations) const {
    std::vector<double> f(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) f[k] = weight_[k] * std::pow(std::abs(x[k]), p_ - 2.0) * x[k];
    return solve(f, iterations);
}

double ConeProblem::nehari_scale(std::span<const double> x) const {
    const double nl = nonlinear(x);
    if (!(nl > 0.0)) throw DegenerateDirection("nehari_scale: ∫ a|u|^p vanishes along this direction");
    return std::pow(norm2(x) / nl, 1.0 / (p_ - 2.0));
}

ConeProblem::Result ConeProblem::descend(std::vector<double> x, const DescentOptions& opt) const {
    if (x.size() != size()) throw InvalidArgument("descend: size mismatch");
    auto rescale = [&](std::vector<double>& y) {
        project_(y);
        const double t = nehari_scale(y);
        for (double& v : y) v *= t;
    };
    rescale(x);

    Result out;
    SolveReport& rep = out.report;
    rep.energy_history.push_back(energy(x));

    int it = 0;
    std::vector<double> w;
    for (; it < opt.max_iter; ++it) {
        int li = 0;
        w = invariance_map(x, &li);
        rep.linear_iterations += li;

        std::vector<double> cand = w;
        bool cand_ok = true;
        try {
            rescale(cand);
        } catch (const DegenerateDirection&) {
            cand_ok = false;
        }
        if (cand_ok) {
            std::vector<double> d(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) d[k] = cand[k] - x[k];
            rep.projected_grad_norm = std::sqrt(norm2(d) / norm2(x));
            if (rep.projected_grad_norm <= opt.tol) {
                rep.converged = true;
                break;
            }
        }

        bool accepted = false;
        if (cand_ok && energy_difference(x, cand) < 0.0) {
            x.swap(cand);
            accepted = true;
        } else {
            for (double lambda = 0.5; lambda >= opt.lambda_min && !accepted; lambda *= 0.5) {
                std::vector<double> y(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] - lambda * (x[k] - w[k]);
                try {
                    rescale(y);
                } catch (const DegenerateDirection&) {
                    continue;
                }
                if (energy_difference(x, y) < 0.0) {
                    x.swap(y);
                    accepted = true;
                }
            }
            if (accepted) rep.flags.push_back("fallback-step");
        }
        if (!accepted) {
            std::ostringstream os;
            os << "descent stagnated at iteration " << it << " (projected step "
               << rep.projected_grad_norm << ")";
            throw Stagnation(os.str(), x);
        }
        rep.energy_history.push_back(energy(x));
        if (opt.on_iterate) opt.on_iterate(x, it);
        if (it % 100 == 0) {
            std::ostringstream os;
            os << "descent it=" << it << " energy=" << rep.energy_history.back()
               << " step=" << rep.projected_grad_norm;
            log::debug(os.str());
        }
    }
    rep.iterations = it;
    rep.energy = energy(x);
    const double n2 = norm2(x);
    rep.nehari_residual = std::abs(n2 - nonlinear(x)) / n2;
    {
        if (!rep.converged) w = invariance_map(x);
        std::vector<double> d(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - w[k];
        rep.residual_norm = std::sqrt(norm2(d) / n2);
    }
    // keep a single copy of each flag
    std::sort(rep.flags.begin(), rep.flags.end());
    rep.flags.erase(std::unique(rep.flags.begin(), rep.flags.end()), rep.flags.end());
    if (!rep.converged) rep.flags.push_back("max-iter");
    out.x = std::move(x);
    return out;
}

}  // namespace egs
