#include "egs/geometry.hpp"

#include "egs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace egs {

double ExtendedReal::value() const {
    if (!finite_) throw InvalidArgument("ExtendedReal::value on +inf");
    return value_;
}

std::partial_ordering operator<=>(const ExtendedReal& lhs, double rhs) {
    if (std::isnan(rhs)) return std::partial_ordering::unordered;
    if (!lhs.finite_) {
        return rhs == std::numeric_limits<double>::infinity() ? std::partial_ordering::equivalent
                                                              : std::partial_ordering::greater;
    }
    return lhs.value_ <=> rhs;
}

bool operator==(const ExtendedReal& lhs, double rhs) { return (lhs <=> rhs) == 0; }

std::partial_ordering operator<=>(const ExtendedReal& lhs, const ExtendedReal& rhs) {
    if (!rhs.finite_) {
        return lhs.finite_ ? std::partial_ordering::less : std::partial_ordering::equivalent;
    }
    return lhs <=> rhs.value_;
}

bool operator==(const ExtendedReal& lhs, const ExtendedReal& rhs) { return (lhs <=> rhs) == 0; }

std::string ExtendedReal::to_string() const {
    if (!finite_) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

ExtendedReal critical_exponent(int n) {
    if (n < 2) throw InvalidArgument("critical_exponent: n must be >= 2");
    if (n == 2) return ExtendedReal::infinity();
    return ExtendedReal(2.0 * n / (n - 2.0));
}

double r_star_vanishing_exponent(int N) {
    const double d = N - 2.0;
    return 2.0 + 8.0 * N / (d * d);
}

double r_star(int N, double p) {
    if (N < 3) throw InvalidArgument("r_star: N must be >= 3");
    if (!(p > 2.0)) throw InvalidArgument("r_star: p must be > 2");
    if (!(p < r_star_vanishing_exponent(N))) return 0.0;
    const double half = (N - 2.0) / 2.0;
    return std::sqrt(std::max(0.0, 2.0 * N / (p - 2.0) - half * half));
}

double symmetry_breaking_exponent(int N, double R) {
    const double half = (N - 2.0) / 2.0;
    return 2.0 + 2.0 * N / (half * half + R * R);
}

BlockNorms st_of(std::span<const double> x, int m) {
    const int N = static_cast<int>(x.size());
    if (m < 1 || m >= N) throw InvalidArgument("st_of: need 1 <= m < N");
    double s2 = 0.0, t2 = 0.0;
    for (int i = 0; i < m; ++i) s2 += x[i] * x[i];
    for (int i = m; i < N; ++i) t2 += x[i] * x[i];
    if (s2 == 0.0 && t2 == 0.0) throw InvalidArgument("st_of: x = 0");
    return {std::sqrt(s2), std::sqrt(t2)};
}

double theta_of(std::span<const double> x, int m) {
    const auto [s, t] = st_of(x, m);
    // atan2 keeps full relative accuracy near both ends of [0, π/2].
    return std::atan2(t, s);
}

double mu(double theta, int N, int m) {
    const double c = std::cos(theta), s = std::sin(theta);
    return std::pow(c, m - 1) * std::pow(s, N - m - 1);
}

double mu_derivative(double theta, int N, int m) {
    const double c = std::cos(theta), s = std::sin(theta);
    double d = 0.0;
    if (N - m - 1 > 0) d += (N - m - 1) * std::pow(c, m) * std::pow(s, N - m - 2);
    if (m - 1 > 0) d -= (m - 1) * std::pow(c, m - 2) * std::pow(s, N - m);
    return d;
}

double sphere_measure(int k) {
    if (k < 0) throw InvalidArgument("sphere_measure: k must be >= 0");
    // ω_k = 2π/(k-1) ω_{k-2}, seeded with ω_0 = 2 and ω_1 = 2π.
    double w = (k % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
    for (int j = (k % 2 == 0) ? 2 : 3; j <= k; j += 2) w *= 2.0 * std::numbers::pi / (j - 1);
    return w;
}

double omega_constant(int N, int m) {
    if (m < 1 || m > N - 1) throw InvalidArgument("omega_constant: need 1 <= m <= N-1");
    return sphere_measure(m - 1) * sphere_measure(N - m - 1);
}

// ---------------------------------------------------------------------------

namespace {

double interpolate(const std::vector<std::pair<double, double>>& table, double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), x,
                               [](double v, const auto& e) { return v < e.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

void check_table(const std::vector<std::pair<double, double>>& table, const char* what) {
    if (table.empty()) throw InvalidArgument(std::string(what) + ": empty table");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first)) {
            throw InvalidArgument(std::string(what) + ": abscissae must be strictly increasing");
        }
    }
    for (const auto& [x, y] : table) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw InvalidArgument(std::string(what) + ": non-finite entry");
        }
    }
}

}  // namespace

WeightSpec::WeightSpec(Kind kind) : kind_(std::move(kind)) {
    if (auto* t = std::get_if<TabulatedRadialWeight>(&kind_)) check_table(t->table, "tabulated weight");
    if (auto* s = std::get_if<SeparableWeight>(&kind_)) {
        check_table(s->theta_table, "separable weight");
    }
}

bool WeightSpec::is_radial() const { return !std::holds_alternative<SeparableWeight>(kind_); }

double WeightSpec::radial(double r) const {
    if (!is_radial()) throw PreconditionError("weight is not radial");
    return (*this)(r, 0.0);
}

double WeightSpec::operator()(double r, double theta) const {
    struct Visitor {
        double r, theta;
        double operator()(const ConstantWeight& w) const { return w.c; }
        double operator()(const RadialExponentialWeight& w) const {
            return w.c0 + w.c1 * std::exp(-r);
        }
        double operator()(const TabulatedRadialWeight& w) const { return interpolate(w.table, r); }
        double operator()(const SeparableWeight& w) const {
            return (w.radial.c0 + w.radial.c1 * std::exp(-r)) * interpolate(w.theta_table, theta);
        }
    };
    return std::visit(Visitor{r, theta}, kind_);
}

void WeightSpec::validate(std::span<const double> radii, std::span<const double> angles) const {
    bool nonzero = false;
    for (double r : radii) {
        double prev = std::numeric_limits<double>::infinity();
        for (double th : angles) {
            const double a = (*this)(r, th);
            if (!std::isfinite(a)) throw InvalidArgument("weight: a is not bounded");
            if (a < 0.0) throw InvalidArgument("weight: a must be nonnegative");
            if (a > prev * (1.0 + 1e-14)) {
                throw InvalidArgument("weight: a must be nonincreasing in theta");
            }
            if (a > 0.0) nonzero = true;
            prev = a;
        }
    }
    if (!nonzero) throw InvalidArgument("weight: a vanishes identically");
}

std::string WeightSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, ConstantWeight>) {
                os << "constant " << w.c;
            } else if constexpr (std::is_same_v<T, RadialExponentialWeight>) {
                os << "radial-exp " << w.c0 << ' ' << w.c1;
            } else if constexpr (std::is_same_v<T, TabulatedRadialWeight>) {
                os << "table";
                for (const auto& [r, a] : w.table) os << ' ' << r << ':' << a;
            } else {
                os << "separable " << w.radial.c0 << ' ' << w.radial.c1 << " ;";
                for (const auto& [t, f] : w.theta_table) os << ' ' << t << ':' << f;
            }
        },
        kind_);
    return os.str();
}

// ---------------------------------------------------------------------------

DomainSpec::DomainSpec(Kind kind) : kind_(kind) {
    if (const auto* b = std::get_if<ExteriorBall>(&kind_)) {
        if (!(b->R > 0.0)) throw InvalidArgument("exterior ball: R must be > 0");
    } else {
        const auto& g = std::get<DoubleRevolution>(kind_).g;
        if (!(g(0.0) < 0.0)) throw InvalidArgument("double revolution: need g(0) < 0");
        if (!(g.kappa > 0.0 && g.kappa <= 1.0)) {
            throw InvalidArgument("double revolution: need 0 < kappa <= 1");
        }
    }
}

double DomainSpec::inner_radius() const {
    if (const auto* b = std::get_if<ExteriorBall>(&kind_)) return b->R;
    // s^2 + κ t^2 = c is closest to the origin on the t = 0 axis (κ <= 1).
    return std::sqrt(std::get<DoubleRevolution>(kind_).g.c);
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (const auto* b = std::get_if<ExteriorBall>(&kind_)) {
        os << "ball " << b->R;
    } else {
        const auto& g = std::get<DoubleRevolution>(kind_).g;
        os << "affine " << g.kappa << ' ' << g.c;
    }
    return os.str();
}

bool domain_contains(const DomainSpec& domain, std::span<const double> x, int m) {
    double s2 = 0.0, t2 = 0.0;
    for (int i = 0; i < m; ++i) s2 += x[i] * x[i];
    for (std::size_t i = m; i < x.size(); ++i) t2 += x[i] * x[i];
    if (const auto* b = std::get_if<ExteriorBall>(&domain.kind())) {
        return s2 + t2 > b->R * b->R;
    }
    return s2 + std::get<DoubleRevolution>(domain.kind()).g(t2) > 0.0;
}

std::vector<double> boundary_normal(const DomainSpec& domain, std::span<const double> x, int m,
                                    double tol) {
    const int N = static_cast<int>(x.size());
    if (m < 1 || m >= N) throw InvalidArgument("boundary_normal: need 1 <= m < N");
    double s2 = 0.0, t2 = 0.0;
    for (int i = 0; i < m; ++i) s2 += x[i] * x[i];
    for (int i = m; i < N; ++i) t2 += x[i] * x[i];
    if (s2 == 0.0 && t2 == 0.0) throw DegeneratePoint("boundary_normal: s = t = 0");

    double level = 0.0, scale = 0.0, gprime = 1.0;
    if (const auto* b = std::get_if<ExteriorBall>(&domain.kind())) {
        level = s2 + t2 - b->R * b->R;
        scale = b->R * b->R;
    } else {
        const auto& g = std::get<DoubleRevolution>(domain.kind()).g;
        level = s2 + g(t2);
        scale = std::max(g.c, s2);
        gprime = g.derivative(t2);
    }
    if (std::abs(level) > tol * scale) {
        throw InvalidArgument("boundary_normal: point is not on the boundary");
    }
    // ∇(s^2 + g(t^2)) = 2 x^s + 2 g'(t^2) x^t points into the domain.
    std::vector<double> n(x.begin(), x.end());
    for (int i = m; i < N; ++i) n[i] *= gprime;
    double norm = 0.0;
    for (double v : n) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : n) v /= norm;
    return n;
}

// ---------------------------------------------------------------------------

ProblemSpec ProblemSpec::exterior_ball(int N, int m, double p, double R, WeightSpec weight) {
    ProblemSpec spec;
    spec.N = N;
    spec.m = m;
    spec.p = p;
    spec.R = R;
    spec.r_max = R + 25.0;
    spec.weight = std::move(weight);
    spec.domain = DomainSpec(ExteriorBall{R});
    return spec;
}

void ProblemSpec::validate() const {
    if (N < 3) throw InvalidArgument("N must be >= 3");
    if (m < 2 || m > N - 1) throw InvalidArgument("m must satisfy 2 <= m <= N-1");
    if (!(p > 2.0)) throw InvalidArgument("p must be > 2");
    if (!(R > 0.0)) throw InvalidArgument("R must be > 0");
    if (!(r_max > R)) throw InvalidArgument("r_max must be > R");
    if (const auto* b = std::get_if<ExteriorBall>(&domain.kind())) {
        if (b->R != R) throw InvalidArgument("exterior ball radius must equal R");
    } else if (R > domain.inner_radius()) {
        throw InvalidArgument("R must not exceed the inner radius of the domain");
    }
}

void ProblemSpec::validate_for_2d() const {
    validate();
    if (!(critical_exponent(N - m + 1) > p)) {
        throw InvalidArgument("p must be < 2*_{N-m+1} = " + critical_exponent(N - m + 1).to_string() +
                              " for the cone solver");
    }
}

ExponentTable conditions_report(int N, double p, double R) {
    if (N < 3) throw InvalidArgument("conditions_report: N must be >= 3");
    if (!(p > 2.0)) throw InvalidArgument("conditions_report: p must be > 2");
    if (!(R > 0.0)) throw InvalidArgument("conditions_report: R must be > 0");

    ExponentTable t;
    t.N = N;
    t.p = p;
    t.R = R;
    t.R_star = r_star(N, p);
    for (int n = 2; n <= N; ++n) t.critical_exponents.emplace_back(n, critical_exponent(n));
    for (int m = 2; m <= N - 1; ++m) {
        if (critical_exponent(N - m + 1) > p) t.existence_m.push_back(m);
    }
    t.radius_hypothesis = R > t.R_star || (R == t.R_star && t.R_star > 0.0);

    if (t.radius_hypothesis) {
        for (int n = N - 1; n >= 2; --n) {
            if (critical_exponent(n) > p) {
                t.multiplicity = n;
                break;
            }
        }
    }
    if (t.multiplicity >= 2) {
        for (int m = N - t.multiplicity + 1; m <= N - 1; ++m) t.admissible_m.push_back(m);
    }

    const double p0 = r_star_vanishing_exponent(N);
    t.two_solutions_any_radius = p >= p0;
    for (int n = 3; 2 * n <= N; ++n) {
        if (N >= 6 && p0 <= p && critical_exponent(n) > p) t.n_solutions_any_radius = true;
    }
    return t;
}

}  // namespace egs
