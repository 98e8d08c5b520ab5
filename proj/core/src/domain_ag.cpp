#include "egs/domain_ag.hpp"

#include "egs/errors.hpp"
#include "egs/isotonic.hpp"
#include "egs/log.hpp"
#include "egs/quadrature.hpp"
#include "egs/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace egs {

AgGrid::AgGrid(int N, int m, AffineG g, int cells, double L)
    : N_(N), m_(m), g_(g), n_(cells), L_(L), h_(L / cells) {
    if (n_ < 4) throw InvalidArgument("AgGrid: need at least 4 cells per side");
    if (!(L_ > 0.0)) throw InvalidArgument("AgGrid: L must be positive");
    unknown_.assign(static_cast<std::size_t>(n_) * n_, -1);
    for (int a = 0; a < n_; ++a) {
        for (int b = 0; b < n_; ++b) {
            const double phi = s(a) * s(a) + g_(t(b) * t(b));
            if (phi > 0.0) {
                unknown_[index(a, b)] = static_cast<long>(active_.size());
                active_.emplace_back(a, b);
            }
        }
    }
    sw_.resize(n_);
    tw_.resize(n_);
    for (int k = 0; k < n_; ++k) {
        sw_[k] = power_integral(k * h_, (k + 1) * h_, m_ - 1);
        tw_[k] = power_integral(k * h_, (k + 1) * h_, N_ - m_ - 1);
    }
}

double AgGrid::cell_weight(int a, int b) const { return sw_[a] * tw_[b]; }

namespace {

/// Polar resampling rings used by the approximate cone correction.
struct Rings {
    std::vector<double> rho, dtheta;
    std::vector<int> count;
    std::vector<std::size_t> offset;
    std::vector<double> mu;  // μ(θ_l) per sample, the isotonic weights
    std::size_t samples = 0;
};

Rings make_rings(const AgGrid& g, double r0) {
    Rings R;
    const double h = g.h();
    for (double rho = r0 + 0.5 * h; rho <= g.L() - h; rho += h) {
        const int nt = std::max(8, static_cast<int>(std::ceil(0.5 * std::numbers::pi * rho / h)));
        R.rho.push_back(rho);
        R.count.push_back(nt);
        R.dtheta.push_back(0.5 * std::numbers::pi / nt);
        R.offset.push_back(R.samples);
        for (int l = 0; l < nt; ++l) R.mu.push_back(mu((l + 0.5) * R.dtheta.back(), g.N(), g.m()));
        R.samples += nt;
    }
    return R;
}

double bilinear(const AgGrid& g, const std::vector<double>& U, double s, double t) {
    const int n = g.cells();
    const double x = std::clamp(s / g.h() - 0.5, 0.0, n - 1.0);
    const double y = std::clamp(t / g.h() - 0.5, 0.0, n - 1.0);
    const int a = std::min(static_cast<int>(x), n - 2), b = std::min(static_cast<int>(y), n - 2);
    const double fx = x - a, fy = y - b;
    return (1 - fx) * (1 - fy) * U[g.index(a, b)] + fx * (1 - fy) * U[g.index(a + 1, b)] +
           (1 - fx) * fy * U[g.index(a, b + 1)] + fx * fy * U[g.index(a + 1, b + 1)];
}

struct ConeCorrection {
    std::shared_ptr<const AgGrid> grid;
    Rings rings;
    double threshold;
    double* last_violation;

    void operator()(std::vector<double>& x) const {
        const AgGrid& g = *grid;
        for (double& v : x) v = std::max(v, 0.0);
        std::vector<double> U(static_cast<std::size_t>(g.cells()) * g.cells(), 0.0);
        double umax = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const auto [a, b] = g.cell(k);
            U[g.index(a, b)] = x[k];
            umax = std::max(umax, x[k]);
        }
        if (umax == 0.0) return;

        std::vector<double> sample(rings.samples), fixed;
        double worst = 0.0;
        for (std::size_t r = 0; r < rings.rho.size(); ++r) {
            for (int l = 0; l < rings.count[r]; ++l) {
                const double th = (l + 0.5) * rings.dtheta[r];
                sample[rings.offset[r] + l] =
                    bilinear(g, U, rings.rho[r] * std::cos(th), rings.rho[r] * std::sin(th));
                if (l > 0) {
                    worst = std::max(worst, sample[rings.offset[r] + l] - sample[rings.offset[r] + l - 1]);
                }
            }
        }
        worst /= umax;
        *last_violation = worst;
        if (worst <= threshold) return;

        fixed = sample;
        for (std::size_t r = 0; r < rings.rho.size(); ++r) {
            std::span<double> row(fixed.data() + rings.offset[r], rings.count[r]);
            std::span<const double> w(rings.mu.data() + rings.offset[r], rings.count[r]);
            project_monotone_cone(row, w);
        }
        auto delta_on_ring = [&](std::size_t r, double th) {
            const double y = std::clamp(th / rings.dtheta[r] - 0.5, 0.0, rings.count[r] - 1.0);
            const int l = std::min(static_cast<int>(y), std::max(rings.count[r] - 2, 0));
            const double f = rings.count[r] > 1 ? y - l : 0.0;
            const std::size_t o = rings.offset[r];
            const double d0 = fixed[o + l] - sample[o + l];
            const double d1 = rings.count[r] > 1 ? fixed[o + l + 1] - sample[o + l + 1] : d0;
            return (1 - f) * d0 + f * d1;
        };
        const double h = g.h();
        for (std::size_t k = 0; k < x.size(); ++k) {
            const auto [a, b] = g.cell(k);
            const double s = g.s(a), t = g.t(b);
            const double r = std::hypot(s, t), th = std::atan2(t, s);
            if (rings.rho.empty() || r < rings.rho.front() || r > rings.rho.back()) continue;
            const std::size_t r0 = std::min(static_cast<std::size_t>((r - rings.rho.front()) / h),
                                            rings.rho.size() - 1);
            const std::size_t r1 = std::min(r0 + 1, rings.rho.size() - 1);
            const double f = r1 == r0 ? 0.0 : std::clamp((r - rings.rho[r0]) / h, 0.0, 1.0);
            x[k] = std::max(0.0, x[k] + (1 - f) * delta_on_ring(r0, th) + f * delta_on_ring(r1, th));
        }
    }
};

double boundary_fraction(const AffineG& g, double s0, double t0, double s1, double t1) {
    // φ > 0 at (s0, t0), φ <= 0 at (s1, t1); bisection for the crossing.
    auto phi = [&](double f) {
        const double s = s0 + f * (s1 - s0), t = t0 + f * (t1 - t0);
        return s * s + g(t * t);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

AgSolution solve_on_Ag(const ProblemSpec& spec, const AgOptions& opt) {
    spec.validate();
    const auto* dr = std::get_if<DoubleRevolution>(&spec.domain.kind());
    if (!dr) throw PreconditionError("solve_on_Ag: domain must be a double-revolution domain");
    if (!(critical_exponent(spec.N - spec.m + 1) > spec.p)) {
        throw InvalidArgument("solve_on_Ag: p must be below 2*_{N-m+1}");
    }
    const AffineG gfun = dr->g;
    const double r_in = std::sqrt(gfun.c);
    const double L = opt.L > 0.0 ? opt.L : r_in + 15.0;
    auto grid = std::make_shared<const AgGrid>(spec.N, spec.m, gfun, opt.cells, L);
    const AgGrid& g = *grid;
    if (g.unknowns() == 0) throw EmptyDomain("solve_on_Ag: the mask removes every cell");

    const int n = g.cells();
    const double h = g.h(), om = omega_constant(spec.N, spec.m);
    const int M_s = spec.m - 1, M_t = spec.N - spec.m - 1;
    SymmetricBandedMatrix A(g.unknowns(), static_cast<std::size_t>(n));
    std::vector<double> mass(g.unknowns()), weight(g.unknowns());

    auto tw = [&](int b) { return power_integral(b * h, (b + 1) * h, M_t); };
    auto sw = [&](int a) { return power_integral(a * h, (a + 1) * h, M_s); };
    // Coupling across one face. F integrates the transverse-free weight along
    // the segment between the two centres (or centre and boundary).
    auto couple = [&](int a, int b, int a2, int b2) {
        const long k = g.unknown(a, b);
        const bool along_s = a2 != a;
        const double trans = along_s ? tw(b) : sw(a);
        const int pw = along_s ? M_s : M_t;
        const double x0 = along_s ? g.s(a) : g.t(b);
        const bool outside = a2 >= n || b2 >= n;
        if (!outside && a2 >= 0 && b2 >= 0 && g.active(a2, b2)) {
            if ((along_s && a2 < a) || (!along_s && b2 < b)) return;  // counted from the other side
            const double x1 = along_s ? g.s(a2) : g.t(b2);
            const double c = om * trans * power_integral(x0, x1, pw) / (h * h);
            const long k2 = g.unknown(a2, b2);
            A.at(k, k) += c;
            A.at(k2, k2) += c;
            A.at(k, k2) -= c;
            return;
        }
        if (a2 < 0 || b2 < 0) return;  // symmetry axis: no flux
        double d, x1;
        if (outside) {
            d = 0.5 * h;
            x1 = x0 + d;
        } else {
            const double f = boundary_fraction(g.g(), g.s(a), g.t(b), g.s(a2), g.t(b2));
            d = std::max(f * h, opt.min_cut_fraction * h);
            x1 = (along_s ? (a2 > a) : (b2 > b)) ? x0 + d : x0 - d;
        }
        const double F = std::abs(power_integral(std::min(x0, x1), std::max(x0, x1), pw));
        A.at(k, k) += om * trans * F / (d * d);
    };

    for (std::size_t k = 0; k < g.unknowns(); ++k) {
        const auto [a, b] = g.cell(k);
        couple(a, b, a + 1, b);
        couple(a, b, a - 1, b);
        couple(a, b, a, b + 1);
        couple(a, b, a, b - 1);
        mass[k] = om * g.cell_weight(a, b);
        A.at(k, k) += mass[k];
        const double r = std::hypot(g.s(a), g.t(b));
        weight[k] = spec.weight(r, std::atan2(g.t(b), g.s(a)));
    }

    double violation = 0.0;
    ConeCorrection corr{grid, make_rings(g, r_in), opt.cone_threshold, &violation};
    ConeProblem problem(std::move(A), std::move(mass), std::move(weight), spec.p, corr);

    // initial guess: radial profile on [√c, L√2] times (1 + ε𝔶)
    ProblemSpec rspec = ProblemSpec::exterior_ball(spec.N, spec.m, spec.p, r_in);
    if (!spec.weight.is_radial()) throw PreconditionError("solve_on_Ag: radial weight required for the initial guess");
    rspec.weight = spec.weight;
    rspec.r_max = std::sqrt(2.0) * L + h;
    const auto rgrid = RadialGrid::uniform(spec.N, r_in, rspec.r_max, opt.radial_M);
    const auto [prof, rrep] = solve_radial(rspec, rgrid);
    std::vector<double> x0(g.unknowns());
    for (std::size_t k = 0; k < g.unknowns(); ++k) {
        const auto [a, b] = g.cell(k);
        const double r = std::hypot(g.s(a), g.t(b)), th = std::atan2(g.t(b), g.s(a));
        const double pos = (r - r_in) / (rspec.r_max - r_in) * opt.radial_M;
        const int i = std::clamp(static_cast<int>(pos), 0, opt.radial_M - 1);
        const double f = std::clamp(pos - i, 0.0, 1.0);
        const double ur = (1 - f) * prof[i] + f * prof[i + 1];
        const double c = std::cos(th), s = std::sin(th);
        x0[k] = ur * (1.0 + opt.epsilon * ((spec.N - spec.m) * c * c - spec.m * s * s));
    }

    DescentOptions dopt;
    dopt.tol = opt.tol;
    dopt.max_iter = opt.max_iter;
    auto res = problem.descend(std::move(x0), dopt);

    AgSolution out;
    out.grid = grid;
    out.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (std::size_t k = 0; k < g.unknowns(); ++k) {
        const auto [a, b] = g.cell(k);
        out.values[g.index(a, b)] = res.x[k];
    }
    out.report = std::move(res.report);
    out.report.flags.push_back("first-order-near-cut-boundary");
    {
        std::vector<double> probe = res.x;
        double v = 0.0;
        ConeCorrection measure{grid, corr.rings, 1e300, &v};
        measure(probe);
        out.ring_violation = v;
    }
    std::ostringstream os;
    os << "solve_on_Ag kappa=" << gfun.kappa << " c=" << gfun.c << ": energy=" << out.report.energy
       << " iterations=" << out.report.iterations << " ring violation=" << out.ring_violation;
    log::info(os.str());
    return out;
}

}  // namespace egs
