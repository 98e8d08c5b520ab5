#pragma once

#include <cstddef>
#include <vector>

namespace egs {

struct QuadratureRule {
    std::vector<double> nodes;    ///< on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
const QuadratureRule& gauss_legendre(std::size_t n);

/// ∫_a^b f with a single n-point Gauss-Legendre panel.
template <class F>
double integrate(F&& f, double a, double b, std::size_t n = 8) {
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * sum;
}

/// ∫_a^b x^k dx for integer k >= 0, evaluated with enough Gauss points to be exact.
double power_integral(double a, double b, int k);

}  // namespace egs
