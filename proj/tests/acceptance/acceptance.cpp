// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset (criterion 14 needs 11 and 13). Exit code is the
// number of failures.

#include "egs/domain_ag.hpp"
#include "egs/geometry.hpp"
#include "egs/isotonic.hpp"
#include "egs/multiplicity.hpp"
#include "egs/quadform.hpp"
#include "egs/radial.hpp"
#include "egs/solver2d.hpp"

#include "support/fields.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace egs;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

const std::vector<std::pair<int, int>> kSplittings{{3, 2}, {4, 2}, {6, 4}, {6, 5}};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ProblemSpec base_spec() { return ProblemSpec::exterior_ball(3, 2, 4.0, 2.0); }

// Results shared between criteria.
std::optional<SolveReport> c11_report;
std::optional<FamilyResult> c13_family;
std::optional<double> ball_energy_512;

Verdict c1() {
    double worst = 0.0, lo = 1e300, hi = 0.0;
    for (auto [N, m] : kSplittings) {
        const double r128 = eta_ode_residual(y_profile(128, N, m));
        const double r256 = eta_ode_residual(y_profile(256, N, m));
        const double r512 = eta_ode_residual(y_profile(512, N, m));
        worst = std::max(worst, r256);
        for (double q : {r128 / r256, r256 / r512}) lo = std::min(lo, q), hi = std::max(hi, q);
    }
    return {worst <= 5e-4 && lo >= 3.2 && hi <= 4.8,
            fmt("max residual(256) %.3g, halving ratios in [%.3f, %.3f]", worst, lo, hi)};
}

Verdict c2() {
    double mean = 0.0, ratio = 0.0;
    for (auto [N, m] : kSplittings) {
        const auto mc = eta_moment_checks(y_profile(4096, N, m));
        mean = std::max(mean, std::abs(mc.mean));
        ratio = std::max(ratio, std::abs(mc.ratio - 2.0 * N));
    }
    return {mean <= 1e-8 && ratio <= 1e-6, fmt("max |mean| %.3g, max |ratio - 2N| %.3g", mean, ratio)};
}

Verdict c3() {
    double worst = 0.0;
    for (int N = 3; N <= 8; ++N) {
        const double full = 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
        for (int m = 2; m <= N - 1; ++m) {
            const double I = oracle::integrate_rel([&](double t) { return mu(t, N, m); }, 0.0,
                                                   std::numbers::pi / 2, 1e-14, 16);
            worst = std::max(worst, std::abs(omega_constant(N, m) * I - full) / full);
        }
    }
    return {worst <= 1e-8, fmt("max relative deviation %.3g", worst)};
}

Verdict c4() {
    bool exact = true;
    for (int N = 3; N <= 10; ++N) exact = exact && r_star(N, 2.0 + 8.0 * N / ((N - 2.0) * (N - 2.0))) == 0.0;
    const double d = std::abs(r_star(3, 4.0) - std::sqrt(2.75));
    return {exact && d <= 1e-12, fmt("zero at the vanishing exponent for N=3..10: %s, |r_star(3,4) - sqrt(2.75)| = %.3g",
                                     exact ? "yes" : "no", d)};
}

Verdict c5() {
    const auto spec = base_spec();
    const auto g = Grid2D::make(spec, 64, 16);
    Discretization disc(spec, g);
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Field u = testfields::random_cone_field(g, rng);
        u.scale(disc.nehari_scale(u));
        const double n2 = disc.h1_norm2(u);
        worst = std::max(worst, std::abs(n2 - disc.nonlinear(u)) / n2);
    }
    return {worst <= 1e-12, fmt("max |I'(tu)(tu)| / ||tu||^2 = %.3g over 100 fields", worst)};
}

Verdict c6() {
    const auto spec = base_spec();
    const auto g = Grid2D::make(spec, 64, 16);
    Discretization disc(spec, g);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> B(1.0, spec.p - 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        Field u = testfields::random_cone_field(g, rng);
        u.scale(disc.nehari_scale(u));
        double beta = B(rng);
        while (!(beta > 1.0 && beta < spec.p - 1.0)) beta = B(rng);
        const auto r = ps_identity_check(ConeField::certify(u), beta, spec);
        worst = std::max(worst, r.deviation / r.norm2);
    }
    return {worst <= 1e-12, fmt("max deviation / ||u||^2 = %.3g over 100 fields", worst)};
}

Verdict c7() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0), W(0.05, 3.0);
    std::uniform_int_distribution<int> L(1, 8);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = L(rng);
        std::vector<double> y(n), w(n);
        for (int k = 0; k < n; ++k) y[k] = U(rng), w[k] = W(rng);
        auto x = y;
        project_monotone_cone(x, w);
        const auto ref = oracle::monotone_cone_qp(y, w);
        for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(x[k] - ref[k]));
    }
    return {worst <= 1e-10, fmt("max deviation from dense QP %.3g over 1000 rows", worst)};
}

Verdict c8() {
    auto spec = ProblemSpec::exterior_ball(3, 2, 4.0, 1.0);
    spec.r_max = 5.0;
    const auto g = Grid2D::make(spec, 8, 4);
    const auto D = testfields::dense_form(*g);
    std::mt19937_64 rng(8);
    double dense_err = 0.0;
    for (int t = 0; t < 10; ++t) {
        const Field rhs = testfields::random_field(g, rng);
        std::vector<double> b = rhs.interior();
        for (int i = 1; i < g->M(); ++i) {
            const double lo = 0.5 * (g->radial().node(i - 1) + g->radial().node(i));
            const double hi = 0.5 * (g->radial().node(i) + g->radial().node(i + 1));
            const double wn = oracle::integrate_rel([](double r) { return r * r; }, lo, hi, 1e-14, 2);
            for (int j = 0; j < g->J(); ++j) b[(i - 1) * g->J() + j] *= g->omega() * wn * g->cell_weight(j);
        }
        const auto ref = oracle::dense_solve(D, b);
        const auto v = linear_solve(rhs, spec).interior();
        double err = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            err = std::max(err, std::abs(v[k] - ref[k]));
            scale = std::max(scale, std::abs(ref[k]));
        }
        dense_err = std::max(dense_err, err / scale);
    }

    const auto spec2 = base_spec();
    const auto g2 = Grid2D::make(spec2, 128, 32);
    Discretization disc(spec2, g2);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Field v = disc.linear_solve(testfields::random_cone_field(g2, rng));
        worst = std::max(worst, std::max(ConeField::monotonicity_violation(v), ConeField::positivity_violation(v)) /
                                    v.max_abs());
    }
    return {dense_err <= 1e-9 && worst <= 1e-8,
            fmt("8x4 relative deviation from dense elimination %.3g; cone violation / max v %.3g", dense_err, worst)};
}

std::optional<std::pair<RadialProfile, SolveReport>> c9_solution;

Verdict c9() {
    const auto spec = base_spec();
    auto sol = solve_radial(spec, RadialGrid::uniform(3, 2.0, spec.r_max, 4096));
    const double e = sol.second.energy;
    const double e_fine = solve_radial(spec, RadialGrid::uniform(3, 2.0, spec.r_max, 8192)).second.energy;
    auto wide = spec;
    wide.r_max = spec.R + 35.0;
    const double e_wide = solve_radial(wide, RadialGrid::uniform(3, 2.0, wide.r_max, 5734)).second.energy;
    const double dM = std::abs(e_fine - e) / e, dR = std::abs(e_wide - e) / e;
    const double nr = sol.second.nehari_residual;
    c9_solution = std::move(sol);
    return {nr <= 1e-8 && dM < 1e-4 && dR < 1e-4,
            fmt("Nehari residual %.3g; energy %.10g, change %.3g (M 4096->8192), %.3g (r_max 25->35)", nr, e, dM, dR)};
}

Verdict c10() {
    if (!c9_solution) c9();
    const auto spec = base_spec();
    const auto q = quadratic_form(c9_solution->first, spec);
    const double rel = std::abs(q.raw_value - q.reduced_value) / std::abs(q.raw_value);
    const bool suff = suff_condition(3, 2, 4.0, 2.0) && r_star(3, 4.0) < 2.0;
    return {rel <= 1e-6 && q.raw_value < 0.0 && q.predicted_nonradial && suff,
            fmt("raw %.8g, reduced %.8g, relative gap %.3g; R* = %.6f < R = 2", q.raw_value, q.reduced_value, rel,
                r_star(3, 4.0))};
}

Verdict c11() {
    const auto spec = base_spec();
    const auto g512 = Grid2D::make(spec, 512, 64), g256 = Grid2D::make(spec, 256, 32);
    const double e_rad = solve_radial(spec, g512->radial()).second.energy;
    const auto [u, rep] = ground_state(spec, g512);
    const auto rep256 = ground_state(spec, g256).second;
    const double err = std::abs(rep.energy - rep256.energy);
    const double delta = e_rad - rep.energy;
    c11_report = rep;
    ball_energy_512 = rep.energy;

    if (!c9_solution) c9();
    std::vector<double> s;
    for (int k = 1; k <= 8; ++k) s.push_back(0.05 * k);
    const auto pert = nehari_perturbation_test(c9_solution->first, spec, s, 64);
    double best = pert.radial_energy;
    for (const auto& pt : pert.points) best = std::min(best, pt.energy);

    return {rep.converged && rep.symmetry_metric > 1e-2 && delta > 5.0 * err && best < pert.radial_energy,
            fmt("metric %.4f; I(u*) = %.8g, radial %.8g, delta %.4g vs 5 x refinement error %.4g; "
                "perturbation min %.8g < %.8g; %d iterations",
                rep.symmetry_metric, rep.energy, e_rad, delta, 5.0 * err, best, pert.radial_energy, rep.iterations)};
}

Verdict c12() {
    auto spec = ProblemSpec::exterior_ball(3, 2, 3.0, 0.5);
    const auto g = Grid2D::make(spec, 512, 64);
    std::vector<double> f(513, 0.0);
    for (int i = 1; i < 512; ++i) {
        const double x = g->radial().node(i) - 0.5;
        f[i] = 2.0 * x * std::exp(-x);
    }
    const auto init = ConeField::certify(Field::separable(g, f, std::vector<double>(64, 1.0)));
    double worst = 0.0;
    int seen = 0;
    GroundStateOptions opt;
    opt.max_iter = 50;
    opt.tol = 1e-300;
    opt.on_iterate = [&](const ConeField& u, int) {
        worst = std::max(worst, symmetry_metric(u));
        ++seen;
    };
    ground_state(spec, g, init, opt);
    return {seen == 50 && worst <= 1e-10, fmt("max symmetry metric %.3g over %d iterations", worst, seen)};
}

Verdict c13() {
    const auto base = ProblemSpec::exterior_ball(6, 4, 5.0, 1.0);
    FamilyOptions opt;
    opt.M = 512;
    opt.J = 64;
    auto fam = run_family(base, {4, 5}, opt);
    const int guaranteed = conditions_report(6, 5.0, 1.0).multiplicity;
    bool ok = fam.records.size() == 2 && fam.claimed_n == 3 && guaranteed == 3;
    std::ostringstream os;
    for (const auto& r : fam.records) {
        ok = ok && r.ok && r.nonradial && r.symmetry_metric > fam.threshold;
        os << "m=" << r.m << " metric " << fmt("%.4f", r.symmetry_metric) << " energy " << fmt("%.6g", r.energy)
           << "; ";
    }
    os << "threshold " << fmt("%.3g", fam.threshold) << ", radial " << fmt("%.6g", fam.radial_energy)
       << "; verdict " << fam.claimed_n << " (guaranteed " << guaranteed << ")";
    c13_family = std::move(fam);
    return {ok, os.str()};
}

Verdict c14() {
    if (!c11_report) c11();
    if (!c13_family) c13();
    std::vector<const SolveReport*> reps{&*c11_report};
    for (const auto& r : c13_family->records) {
        if (r.ok) reps.push_back(&r.report);
    }
    int checked = 0;
    bool ok = true;
    double worst = 0.0;
    for (const auto* r : reps) {
        for (int k : {4, 8, 16}) {
            const auto it = r->tail_bounds.find(k);
            if (it == r->tail_bounds.end()) {
                ok = false;
                continue;
            }
            ++checked;
            ok = ok && it->second.first <= it->second.second;
            worst = std::max(worst, it->second.first / it->second.second);
        }
    }
    return {ok && checked == 3 * static_cast<int>(reps.size()),
            fmt("%d (field, k) pairs, max lhs/rhs %.3g", checked, worst)};
}

Verdict c15() {
    if (!ball_energy_512) c11();
    const auto base = base_spec();
    // matched resolution: same spacing as the 512-interval radial grid
    const double h = (base.r_max - base.R) / 512.0;
    auto spec = base;
    spec.domain = DomainSpec(DoubleRevolution{AffineG{1.0, base.R * base.R}});
    AgOptions opt;
    opt.L = base.R + 15.0;
    opt.cells = static_cast<int>(std::lround(opt.L / h));
    const auto ball = solve_on_Ag(spec, opt);
    const double rel = std::abs(ball.report.energy - *ball_energy_512) / *ball_energy_512;

    auto aniso = ProblemSpec::exterior_ball(3, 2, 4.0, 1.0);
    aniso.domain = DomainSpec(DoubleRevolution{AffineG{0.5, 1.0}});
    AgOptions o2;
    const auto sol = solve_on_Ag(aniso, o2);
    double mn = 0.0, mx = 0.0;
    for (double v : sol.values) mn = std::min(mn, v), mx = std::max(mx, v);
    return {rel <= 0.02 && ball.report.converged && sol.report.converged && mn >= 0.0 && mx > 0.0 &&
                sol.report.nehari_residual <= 1e-6,
            fmt("g = t - 4: energy %.8g vs ball %.8g (%.3g%%, %d cells); g = t/2 - 1: energy %.6g, "
                "Nehari residual %.3g, min %.3g, max %.4g",
                ball.report.energy, *ball_energy_512, 100.0 * rel, opt.cells, sol.report.energy,
                sol.report.nehari_residual, mn, mx)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8,
                                                         c9, c10, c11, c12, c13, c14, c15};
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s  (%.2f s)  %s\n", id, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
    return failures;
}
