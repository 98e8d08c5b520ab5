#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics: quadrature, ODE integration and linear algebra are
// written from scratch so that agreement is evidence, not tautology.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 30) {
    auto simpson = [&](double l, double r, double fl, double fm, double fr) {
        return (r - l) / 6.0 * (fl + 4.0 * fm + fr);
    };
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double l, double r, double fl, double fm, double fr, double whole, double eps, int d) {
            const double m = 0.5 * (l + r);
            const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
            const double flm = f(lm), frm = f(rm);
            const double left = simpson(l, m, fl, flm, fm), right = simpson(m, r, fm, frm, fr);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
            return rec(l, m, fl, flm, fm, left, 0.5 * eps, d - 1) + rec(m, r, fm, frm, fr, right, 0.5 * eps, d - 1);
        };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Sum of adaptive Simpson over `pieces` equal subintervals.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol, int pieces = 64) {
    double s = 0.0;
    const double h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) s += adaptive_simpson(f, a + k * h, a + (k + 1) * h, tol / pieces);
    return s;
}

/// integrate() to a tolerance relative to the size of the result.
inline double integrate_rel(const std::function<double(double)>& f, double a, double b, double rel,
                            int pieces = 64) {
    const double rough = integrate(f, a, b, std::numeric_limits<double>::infinity(), pieces);
    return integrate(f, a, b, rel * std::max(std::abs(rough), 1e-300), pieces);
}

/// Gaussian elimination with partial pivoting on a dense row-major matrix.
inline std::vector<double> dense_solve(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        }
        if (A[piv * n + c] == 0.0) throw std::runtime_error("dense_solve: singular");
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A[r * n + c] / A[c * n + c];
            for (std::size_t k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        x[i] = s / A[i * n + i];
    }
    return x;
}

/// Nearest nonincreasing, nonnegative vector in the weighted metric, by
/// enumerating every partition into contiguous blocks (optionally pinning the
/// last block at zero) and keeping the best feasible candidate.
inline std::vector<double> monotone_cone_qp(const std::vector<double>& y, const std::vector<double>& w) {
    const std::size_t n = y.size();
    std::vector<double> best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (unsigned cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
        for (int pin = 0; pin < 2; ++pin) {
            std::vector<double> x(n);
            std::size_t start = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool end = i == n - 1 || (cuts >> i & 1u);
                if (!end) continue;
                double sw = 0.0, swy = 0.0;
                for (std::size_t k = start; k <= i; ++k) sw += w[k], swy += w[k] * y[k];
                const double v = (pin && i == n - 1) ? 0.0 : swy / sw;
                for (std::size_t k = start; k <= i; ++k) x[k] = v;
                start = i + 1;
            }
            bool feasible = x[n - 1] >= 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) feasible = feasible && x[i] >= x[i + 1];
            if (!feasible) continue;
            double obj = 0.0;
            for (std::size_t i = 0; i < n; ++i) obj += w[i] * (x[i] - y[i]) * (x[i] - y[i]);
            if (obj < best_obj) best_obj = obj, best = x;
        }
    }
    return best;
}

/// Positive decaying solution of u'' + (N-1)/r u' - u + c u^{p-1} = 0 with
/// u(R) = 0, found by bisection on the slope u'(R) and classic RK4.
struct Shooting {
    int N;
    double p, R, c = 1.0;
    double h = 1e-3;

    /// +1 if the trajectory crosses zero (slope too large), -1 if it turns
    /// back up before reaching r_end (slope too small).
    int classify(double slope, double r_end, std::vector<double>* trace = nullptr) const {
        double r = R, u = 0.0, v = slope;
        auto rhs = [&](double rr, double uu, double vv, double& du, double& dv) {
            du = vv;
            dv = -(N - 1) / rr * vv + uu - c * std::pow(std::abs(uu), p - 2.0) * uu;
        };
        bool descending = false;
        if (trace) trace->assign(1, 0.0);
        while (r < r_end) {
            double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
            rhs(r, u, v, k1u, k1v);
            rhs(r + h / 2, u + h / 2 * k1u, v + h / 2 * k1v, k2u, k2v);
            rhs(r + h / 2, u + h / 2 * k2u, v + h / 2 * k2v, k3u, k3v);
            rhs(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
            u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
            v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
            r += h;
            if (trace) trace->push_back(u);
            if (u < 0.0) return +1;
            if (v < 0.0) descending = true;
            if (descending && v > 0.0) return -1;
        }
        return v + u > 0.0 ? -1 : +1;
    }

    /// u on the uniform grid R + k h, k = 0..K, for r <= r_end.
    std::vector<double> profile(double r_end) const {
        double lo = 1e-8, hi = 1.0;
        while (classify(hi, r_end) < 0) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (classify(mid, r_end) > 0 ? hi : lo) = mid;
        }
        std::vector<double> trace;
        classify(0.5 * (lo + hi), r_end, &trace);
        return trace;
    }
};

/// Linear interpolation in a uniformly sampled table starting at x0 with step h.
inline double sample(const std::vector<double>& table, double x0, double h, double x) {
    const double pos = (x - x0) / h;
    const std::size_t k = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), table.size() - 2);
    const double f = pos - static_cast<double>(k);
    return (1.0 - f) * table[k] + f * table[k + 1];
}

}  // namespace oracle
