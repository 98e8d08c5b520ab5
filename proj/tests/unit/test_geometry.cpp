#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egs/errors.hpp"
#include "egs/geometry.hpp"

#include "../support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace egs;
using std::numbers::pi;

TEST_CASE("critical exponents") {
    CHECK_FALSE(critical_exponent(2).is_finite());
    CHECK(critical_exponent(3) == 6.0);
    CHECK(critical_exponent(6) == 3.0);
    CHECK_THROWS_AS(critical_exponent(1), InvalidArgument);
    CHECK_THROWS_AS(critical_exponent(2).value(), InvalidArgument);

    // The reduction raises the admissible range for every splitting.
    for (int N = 3; N <= 10; ++N) {
        for (int m = 2; m <= N - 1; ++m) CHECK(critical_exponent(N - m + 1) > critical_exponent(N));
    }
    CHECK(critical_exponent(2) > 1e300);
    CHECK(critical_exponent(2) == critical_exponent(2));
    CHECK(critical_exponent(4) < critical_exponent(2));
}

TEST_CASE("r_star examples and shape") {
    CHECK(r_star(3, 26.0) == 0.0);
    CHECK(r_star(3, 4.0) == doctest::Approx(std::sqrt(2.75)).epsilon(1e-14));
    CHECK(r_star(4, 6.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (int N = 3; N <= 10; ++N) {
        const double p0 = 2.0 + 8.0 * N / ((N - 2.0) * (N - 2.0));
        CHECK(r_star(N, p0) == 0.0);
        CHECK(r_star(N, p0 + 1.0) == 0.0);
        // Nonincreasing in p and continuous at the vanishing exponent.
        double prev = r_star(N, 2.01);
        for (double p = 2.02; p < p0; p += 0.01) {
            const double v = r_star(N, p);
            CHECK(v <= prev);
            prev = v;
        }
        CHECK(r_star(N, p0 * (1 - 1e-12)) < 1e-4);
    }
    CHECK_THROWS_AS(r_star(2, 4.0), InvalidArgument);
    CHECK_THROWS_AS(r_star(3, 2.0), InvalidArgument);
}

TEST_CASE("block norms and the angle") {
    const std::vector<double> e1{3.0, 0.0, 0.0};
    CHECK(theta_of(e1, 2) == 0.0);
    CHECK(st_of(e1, 2).s == 3.0);
    CHECK(st_of(e1, 2).t == 0.0);

    const std::vector<double> eN{0.0, 0.0, 2.5};
    CHECK(theta_of(eN, 2) == doctest::Approx(pi / 2).epsilon(1e-15));
    CHECK(st_of(eN, 2).s == 0.0);
    CHECK(st_of(eN, 2).t == 2.5);

    const std::vector<double> diag{1.0, 0.0, 1.0, 0.0};
    CHECK(theta_of(diag, 2) == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(st_of(diag, 2).s == doctest::Approx(1.0));
    CHECK(st_of(diag, 2).t == doctest::Approx(1.0));

    CHECK_THROWS_AS(st_of(std::vector<double>(4, 0.0), 2), InvalidArgument);
    CHECK_THROWS_AS(theta_of(std::vector<double>(4, 0.0), 2), InvalidArgument);

    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const int N = 3 + trial % 6;
        const int m = 1 + trial % (N - 1);
        std::vector<double> x(N);
        for (double& v : x) v = g(rng);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double r = std::sqrt(r2);
        const auto [s, t] = st_of(x, m);
        const double th = theta_of(x, m);
        CHECK(th >= 0.0);
        CHECK(th <= pi / 2);
        CHECK(std::hypot(s, t) == doctest::Approx(r).epsilon(1e-14));
        CHECK(r * std::cos(th) == doctest::Approx(s).epsilon(1e-12));
        CHECK(r * std::sin(th) == doctest::Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("angular density") {
    CHECK(mu(pi / 4, 4, 2) == doctest::Approx(0.5).epsilon(1e-15));
    for (int N = 3; N <= 8; ++N) CHECK(mu(0.0, N, N - 1) == 1.0);
    CHECK(mu(0.0, 5, 2) == 0.0);

    for (int N = 3; N <= 8; ++N) {
        for (int m = 2; m <= N - 1; ++m) {
            for (int k = 0; k <= 40; ++k) {
                const double th = k * (pi / 2) / 40;
                const double direct = std::pow(std::cos(th), m - 1) * std::pow(std::sin(th), N - m - 1);
                CHECK(mu(th, N, m) == doctest::Approx(direct).epsilon(1e-14));
                CHECK(mu(th, N, m) >= 0.0);
                if (k > 0 && k < 40) {
                    const double h = 1e-5;
                    const double fd = (mu(th + h, N, m) - mu(th - h, N, m)) / (2 * h);
                    CHECK(mu_derivative(th, N, m) == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
                }
            }
            CHECK((mu(0.0, N, m) == 0.0) == (N - m - 1 > 0));
            CHECK((std::abs(mu(pi / 2, N, m)) < 1e-15) == (m - 1 > 0));
        }
    }
}

TEST_CASE("sphere constants") {
    CHECK(omega_constant(3, 2) == doctest::Approx(4 * pi).epsilon(1e-15));
    CHECK(omega_constant(4, 2) == doctest::Approx(4 * pi * pi).epsilon(1e-15));
    CHECK(omega_constant(6, 4) == doctest::Approx(4 * pi * pi * pi).epsilon(1e-15));
    CHECK(sphere_measure(0) == 2.0);
    CHECK_THROWS_AS(sphere_measure(-1), InvalidArgument);
    CHECK_THROWS_AS(omega_constant(4, 4), InvalidArgument);

    for (int k = 1; k <= 12; ++k) {
        const double gamma_form = 2.0 * std::pow(pi, (k + 1) / 2.0) / std::tgamma((k + 1) / 2.0);
        CHECK(sphere_measure(k) == doctest::Approx(gamma_form).epsilon(1e-13));
    }

    // ω_{N,m} ∫ μ dθ is the full sphere S^{N-1}.
    for (int N = 3; N <= 8; ++N) {
        const double full = 2.0 * std::pow(pi, N / 2.0) / std::tgamma(N / 2.0);
        for (int m = 2; m <= N - 1; ++m) {
            const double I = oracle::integrate([&](double t) { return mu(t, N, m); }, 0.0, pi / 2, 1e-14);
            CHECK(std::abs(omega_constant(N, m) * I - full) / full <= 1e-8);
        }
    }
}

TEST_CASE("conditions report") {
    SUBCASE("supercritical exponent, any radius") {
        const auto t = conditions_report(3, 26.0, 0.5);
        CHECK(t.multiplicity == 2);
        CHECK(t.admissible_m == std::vector<int>{2});
        CHECK(t.two_solutions_any_radius);
        CHECK(t.R_star == 0.0);
    }
    SUBCASE("N = 6, p = 5") {
        const auto t = conditions_report(6, 5.0, 1.0);
        CHECK(t.multiplicity == 3);
        CHECK(t.admissible_m == std::vector<int>{4, 5});
        CHECK(t.n_solutions_any_radius);
        CHECK(t.existence_m == std::vector<int>{4, 5});  // 2*_4 = 4 < 5 rules out m = 3
    }
    SUBCASE("radius below threshold") {
        const auto t = conditions_report(3, 4.0, 1.0);
        CHECK(t.multiplicity == 1);
        CHECK(t.admissible_m.empty());
        CHECK_FALSE(t.radius_hypothesis);
    }
    SUBCASE("boundary radius") {
        CHECK(conditions_report(4, 6.0, 1.0).radius_hypothesis);
    }
    SUBCASE("monotone in R") {
        for (int N = 3; N <= 9; ++N) {
            for (double p : {2.5, 3.0, 4.0, 5.0, 7.0, 12.0}) {
                int prev = 0;
                for (double R = 0.05; R < 6.0; R += 0.05) {
                    const int n = conditions_report(N, p, R).multiplicity;
                    CHECK(n >= prev);
                    prev = n;
                }
            }
        }
    }
    CHECK_THROWS_AS(conditions_report(2, 4.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(conditions_report(3, 2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(conditions_report(3, 4.0, 0.0), InvalidArgument);
}

TEST_CASE("domains") {
    const DomainSpec ag(DoubleRevolution{AffineG{1.0, 1.0}});
    CHECK(domain_contains(ag, std::vector<double>{2.0, 0.0, 0.0}, 2));
    CHECK_FALSE(domain_contains(ag, std::vector<double>{0.5, 0.0, 0.0}, 2));

    const DomainSpec ball(ExteriorBall{1.0});
    CHECK_FALSE(domain_contains(ball, std::vector<double>{0.5, 0.0, 0.0}, 2));
    CHECK(domain_contains(ball, std::vector<double>{0.0, 0.0, 1.5}, 2));

    // κ = 1: the normal is radial.
    const double a = 1.0 / std::sqrt(2.0);
    const std::vector<double> x{a, 0.0, a};
    const auto n = boundary_normal(ag, x, 2);
    for (int i = 0; i < 3; ++i) CHECK(n[i] == doctest::Approx(x[i]).epsilon(1e-14));

    // κ = 1/2: normal ∝ x^s + κ x^t.
    const DomainSpec ell(DoubleRevolution{AffineG{0.5, 1.0}});
    const std::vector<double> y{std::sqrt(0.5), 0.0, 1.0};  // 0.5 + 0.5 - 1 = 0
    const auto ny = boundary_normal(ell, y, 2);
    const double len = std::sqrt(0.5 + 0.25);
    CHECK(ny[0] == doctest::Approx(std::sqrt(0.5) / len));
    CHECK(ny[2] == doctest::Approx(0.5 / len));

    CHECK_THROWS_AS(boundary_normal(ag, std::vector<double>{0.0, 0.0, 0.0}, 2), DegeneratePoint);
    CHECK_THROWS_AS(boundary_normal(ag, std::vector<double>{2.0, 0.0, 0.0}, 2), InvalidArgument);
    CHECK_THROWS_AS(DomainSpec(DoubleRevolution{AffineG{1.0, -1.0}}), InvalidArgument);
    CHECK_THROWS_AS(DomainSpec(DoubleRevolution{AffineG{1.5, 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(DomainSpec(ExteriorBall{0.0}), InvalidArgument);
    CHECK(ell.inner_radius() == 1.0);
}

TEST_CASE("weights") {
    const std::vector<double> radii{1.0, 2.0, 5.0}, angles{0.1, 0.7, 1.5};
    CHECK_NOTHROW(WeightSpec::constant(2.0).validate(radii, angles));
    CHECK_THROWS_AS(WeightSpec::constant(0.0).validate(radii, angles), InvalidArgument);
    CHECK_THROWS_AS(WeightSpec::constant(-1.0).validate(radii, angles), InvalidArgument);

    const WeightSpec rexp(RadialExponentialWeight{1.0, 2.0});
    CHECK(rexp(1.0, 0.3) == doctest::Approx(1.0 + 2.0 * std::exp(-1.0)));
    CHECK(rexp.is_radial());

    const WeightSpec table(TabulatedRadialWeight{{{1.0, 2.0}, {3.0, 4.0}}});
    CHECK(table.radial(2.0) == doctest::Approx(3.0));
    CHECK(table.radial(0.0) == 2.0);
    CHECK(table.radial(9.0) == 4.0);
    CHECK_THROWS_AS(WeightSpec(TabulatedRadialWeight{{{1.0, 2.0}, {1.0, 4.0}}}), InvalidArgument);

    const WeightSpec dec(SeparableWeight{{1.0, 0.0}, {{0.0, 1.0}, {1.6, 0.5}}});
    CHECK_FALSE(dec.is_radial());
    CHECK_THROWS_AS(dec.radial(1.0), PreconditionError);
    CHECK_NOTHROW(dec.validate(radii, angles));
    const WeightSpec inc(SeparableWeight{{1.0, 0.0}, {{0.0, 0.5}, {1.6, 1.0}}});
    CHECK_THROWS_AS(inc.validate(radii, angles), InvalidArgument);
}

TEST_CASE("problem spec invariants") {
    auto spec = ProblemSpec::exterior_ball(3, 2, 4.0, 2.0);
    CHECK(spec.r_max == 27.0);
    CHECK_NOTHROW(spec.validate_for_2d());
    spec.m = 1;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);
    spec.m = 3;
    CHECK_THROWS_AS(spec.validate(), InvalidArgument);

    auto big = ProblemSpec::exterior_ball(6, 2, 5.0, 1.0);
    CHECK_NOTHROW(big.validate());
    CHECK_THROWS_AS(big.validate_for_2d(), InvalidArgument);  // 2*_5 = 10/3 < 5

    auto sup = ProblemSpec::exterior_ball(3, 2, 7.0, 1.0);
    CHECK_NOTHROW(sup.validate_for_2d());

    auto trunc = ProblemSpec::exterior_ball(3, 2, 4.0, 2.0);
    trunc.r_max = 1.0;
    CHECK_THROWS_AS(trunc.validate(), InvalidArgument);
}
