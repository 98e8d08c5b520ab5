#pragma once

// Coordinates, weights, exponent/threshold arithmetic and domain descriptions
// for the O(m) x O(N-m) symmetry reduction of -Δu + u = a(x) u^{p-1} on
// exterior domains of R^N.

#include <compare>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace egs {

/// A value in (-inf, +inf]. Critical Sobolev exponents are +inf in dimension 2.
class ExtendedReal {
public:
    static constexpr ExtendedReal infinity() { return ExtendedReal{}; }
    constexpr explicit ExtendedReal(double value) : finite_(true), value_(value) {}

    constexpr bool is_finite() const { return finite_; }
    /// Throws InvalidArgument when infinite.
    double value() const;

    friend std::partial_ordering operator<=>(const ExtendedReal& lhs, double rhs);
    friend bool operator==(const ExtendedReal& lhs, double rhs);
    friend std::partial_ordering operator<=>(const ExtendedReal& lhs, const ExtendedReal& rhs);
    friend bool operator==(const ExtendedReal& lhs, const ExtendedReal& rhs);

    std::string to_string() const;

private:
    constexpr ExtendedReal() : finite_(false), value_(0.0) {}
    bool finite_;
    double value_;
};

/// 2*_n: 2n/(n-2) for n >= 3, +inf for n = 2.
ExtendedReal critical_exponent(int n);

/// Inner-radius threshold above which the sufficient symmetry-breaking
/// condition holds for the exponent p. Zero when p >= 2 + 8N/(N-2)^2.
double r_star(int N, double p);

/// 2 + 8N/(N-2)^2, the exponent at which r_star reaches zero.
double r_star_vanishing_exponent(int N);

/// Lower end of the sufficient range 2 + 2N/(((N-2)/2)^2 + R^2) <= p.
double symmetry_breaking_exponent(int N, double R);

/// Angle between the R^m and R^{N-m} blocks, in [0, π/2]. N = x.size().
double theta_of(std::span<const double> x, int m);

struct BlockNorms {
    double s;  ///< |(x_1..x_m)|
    double t;  ///< |(x_{m+1}..x_N)|
};
BlockNorms st_of(std::span<const double> x, int m);

/// μ(θ) = cos^{m-1}θ sin^{N-m-1}θ.
double mu(double theta, int N, int m);
/// μ'(θ).
double mu_derivative(double theta, int N, int m);

/// Surface measure of S^k ⊂ R^{k+1}, with ω_0 = 2.
double sphere_measure(int k);

/// ω_{N,m} = ω_{m-1} ω_{N-m-1}.
double omega_constant(int N, int m);

// ---------------------------------------------------------------------------
// Weights a(r, θ)

struct ConstantWeight {
    double c = 1.0;
};

/// a(r) = c0 + c1 e^{-r}
struct RadialExponentialWeight {
    double c0 = 1.0;
    double c1 = 0.0;
};

/// Piecewise linear in r through (r, a) pairs; constant beyond the ends.
struct TabulatedRadialWeight {
    std::vector<std::pair<double, double>> table;
};

/// (c0 + c1 e^{-r}) * f(θ) with f piecewise linear through (θ, f) pairs.
struct SeparableWeight {
    RadialExponentialWeight radial;
    std::vector<std::pair<double, double>> theta_table;
};

class WeightSpec {
public:
    using Kind = std::variant<ConstantWeight, RadialExponentialWeight, TabulatedRadialWeight,
                              SeparableWeight>;

    WeightSpec() : kind_(ConstantWeight{1.0}) {}
    explicit WeightSpec(Kind kind);

    static WeightSpec constant(double c) { return WeightSpec(ConstantWeight{c}); }

    const Kind& kind() const { return kind_; }
    bool is_radial() const;
    double operator()(double r, double theta) const;
    /// Radial part only; throws PreconditionError for nonradial weights.
    double radial(double r) const;

    /// Checks a >= 0, a not identically 0, boundedness and a_θ <= 0 on the
    /// given sample points. Throws InvalidArgument.
    void validate(std::span<const double> radii, std::span<const double> angles) const;

    std::string describe() const;

private:
    Kind kind_;
};

// ---------------------------------------------------------------------------
// Domains

/// g(τ) = κτ - c.
struct AffineG {
    double kappa = 1.0;
    double c = 1.0;

    double operator()(double tau) const { return kappa * tau - c; }
    double derivative(double /*tau*/) const { return kappa; }
};

struct ExteriorBall {
    double R = 1.0;
};

/// A_g = { s^2 + g(t^2) > 0 }.
struct DoubleRevolution {
    AffineG g;
};

class DomainSpec {
public:
    using Kind = std::variant<ExteriorBall, DoubleRevolution>;

    DomainSpec() : kind_(ExteriorBall{}) {}
    explicit DomainSpec(Kind kind);

    const Kind& kind() const { return kind_; }
    bool is_ball() const { return std::holds_alternative<ExteriorBall>(kind_); }

    /// Radius of the largest ball contained in the complement of the domain.
    double inner_radius() const;
    std::string describe() const;

private:
    Kind kind_;
};

bool domain_contains(const DomainSpec& domain, std::span<const double> x, int m);

/// Unit normal at a boundary point pointing into the domain.
/// Throws InvalidArgument off the boundary (relative tolerance `tol`) and
/// DegeneratePoint at s = t = 0.
std::vector<double> boundary_normal(const DomainSpec& domain, std::span<const double> x, int m,
                                    double tol = 1e-9);

// ---------------------------------------------------------------------------

struct ProblemSpec {
    int N = 3;
    int m = 2;
    double p = 4.0;
    double R = 1.0;
    double r_max = 26.0;
    WeightSpec weight;
    DomainSpec domain;

    /// Builds a spec on the exterior ball A_R with r_max = R + 25.
    static ProblemSpec exterior_ball(int N, int m, double p, double R,
                                     WeightSpec weight = WeightSpec::constant(1.0));

    /// Checks the structural invariants. Throws InvalidArgument.
    void validate() const;
    /// Additionally requires p < 2*_{N-m+1}.
    void validate_for_2d() const;
};

struct ExponentTable {
    int N = 0;
    double p = 0.0;
    double R = 0.0;
    double R_star = 0.0;
    /// 2*_n for n = 2..N.
    std::vector<std::pair<int, ExtendedReal>> critical_exponents;
    /// Guaranteed number of rotationally nonequivalent solutions (1 = radial only).
    int multiplicity = 1;
    std::vector<int> admissible_m;
    /// Splittings for which the cone existence result applies (p < 2*_{N-m+1}).
    std::vector<int> existence_m;
    bool radius_hypothesis = false;        ///< R > R*, or R = R* > 0
    bool two_solutions_any_radius = false; ///< p >= 2 + 8N/(N-2)^2
    bool n_solutions_any_radius = false;   ///< N >= 6, 3 <= n <= N/2, 2+8N/(N-2)^2 <= p < 2*_n
};

ExponentTable conditions_report(int N, double p, double R);

}  // namespace egs
