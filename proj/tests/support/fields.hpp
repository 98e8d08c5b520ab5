#pragma once

// Random fields and a dense copy of the discrete form, shared by the unit
// tests and the acceptance run.

#include "egs/grid2d.hpp"
#include "egs/geometry.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testfields {

using namespace egs;
using std::numbers::pi;

/// Nonnegative rows, nonincreasing in θ, with a bump-shaped radial envelope.
inline Field random_cone_field(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field f(g);
    const double R = g->radial().inner(), L = g->radial().outer() - R;
    for (int i = 1; i < g->M(); ++i) {
        const double x = (g->radial().node(i) - R) / L;
        const double env = std::sin(pi * x) * (0.5 + U(rng));
        std::vector<double> row(g->J());
        double level = 0.0;
        for (int j = g->J() - 1; j >= 0; --j) {
            level += U(rng) < 0.3 ? 0.0 : U(rng);
            row[j] = level;
        }
        for (int j = 0; j < g->J(); ++j) f.at(i, j) = env * row[j] / std::max(level, 1e-300);
    }
    return f;
}

inline Field random_field(const GridPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Field f(g);
    for (int i = 1; i < g->M(); ++i) {
        for (int j = 0; j < g->J(); ++j) f.at(i, j) = n(rng);
    }
    return f;
}

/// Dense copy of the discrete H¹ form built directly from the grid
/// quadrature, without going through the library's assembly.
inline std::vector<double> dense_form(const Grid2D& g) {
    const int M = g.M(), J = g.J();
    const std::size_t n = g.interior_size();
    std::vector<double> A(n * n, 0.0);
    auto id = [&](int i, int j) -> long { return (i < 1 || i > M - 1) ? -1 : long(i - 1) * J + j; };
    auto add_diff = [&](long a, long b, double c) {  // c (x_a − x_b)², with Dirichlet rows absent
        if (a >= 0) A[a * n + a] += c;
        if (b >= 0) A[b * n + b] += c;
        if (a >= 0 && b >= 0) {
            A[a * n + b] -= c;
            A[b * n + a] -= c;
        }
    };
    const auto& rg = g.radial();
    for (int i = 0; i < M; ++i) {
        const double h = rg.node(i + 1) - rg.node(i);
        const double F = oracle::integrate_rel([&](double r) { return r * r * std::pow(r, g.N() - 3); },
                                           rg.node(i), rg.node(i + 1), 1e-13, 4);
        for (int j = 0; j < J; ++j) add_diff(id(i, j), id(i + 1, j), g.omega() * g.cell_weight(j) * F / (h * h));
    }
    for (int i = 1; i < M; ++i) {
        const double lo = 0.5 * (rg.node(i - 1) + rg.node(i)), hi = 0.5 * (rg.node(i) + rg.node(i + 1));
        const double wh = oracle::integrate_rel([&](double r) { return std::pow(r, g.N() - 3); }, lo, hi, 1e-13, 4);
        const double wn = oracle::integrate_rel([&](double r) { return std::pow(r, g.N() - 1); }, lo, hi, 1e-13, 4);
        for (int f = 1; f < J; ++f) {
            add_diff(id(i, f - 1), id(i, f), g.omega() * wh * mu(f * g.dtheta(), g.N(), g.m()) / g.dtheta());
        }
        for (int j = 0; j < J; ++j) {
            const double q = oracle::integrate_rel([&](double t) { return mu(t, g.N(), g.m()); },
                                               j * g.dtheta(), (j + 1) * g.dtheta(), 1e-13, 4);
            A[id(i, j) * n + id(i, j)] += g.omega() * wn * q;
        }
    }
    return A;
}

}  // namespace testfields
