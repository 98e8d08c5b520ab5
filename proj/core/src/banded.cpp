#include "egs/banded.hpp"

#include "egs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace egs {

SymmetricBandedMatrix::SymmetricBandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), band_(n * (bandwidth + 1), 0.0) {}

double& SymmetricBandedMatrix::at(std::size_t i, std::size_t j) {
    if (j > i) std::swap(i, j);
    if (i - j > bw_ || i >= n_) throw InvalidArgument("banded matrix: entry outside the band");
    return band_[i * (bw_ + 1) + (i - j)];
}

double SymmetricBandedMatrix::at(std::size_t i, std::size_t j) const {
    if (j > i) std::swap(i, j);
    if (i >= n_) throw InvalidArgument("banded matrix: index out of range");
    if (i - j > bw_) return 0.0;
    return band_[i * (bw_ + 1) + (i - j)];
}

void SymmetricBandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = &band_[i * (bw_ + 1)];
        double acc = row[0] * x[i];
        const std::size_t kmax = std::min(bw_, i);
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double a = row[k];
            acc += a * x[i - k];
            y[i - k] += a * x[i];
        }
        y[i] += acc;
    }
}

double SymmetricBandedMatrix::quadratic_form(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += x[i] * y[i];
    return s;
}

BandedCholesky::BandedCholesky(const SymmetricBandedMatrix& a)
    : n_(a.size()), bw_(a.bandwidth()), band_(n_ * (bw_ + 1), 0.0) {
    // band_[i*(bw+1) + (i-j)] = L(i, j)
    const std::size_t w = bw_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > bw_ ? i - bw_ : 0;
        for (std::size_t j = j0; j <= i; ++j) {
            double s = a.at(i, j);
            const std::size_t k0 = std::max(j0, j > bw_ ? j - bw_ : 0);
            const double* li = &band_[i * w];
            const double* lj = &band_[j * w];
            for (std::size_t k = k0; k < j; ++k) s -= li[i - k] * lj[j - k];
            if (i == j) {
                if (!(s > 0.0)) {
                    throw SolverFailure("banded Cholesky: matrix not positive definite at row " +
                                            std::to_string(i),
                                        {});
                }
                band_[i * w] = std::sqrt(s);
            } else {
                band_[i * w + (i - j)] = s / lj[0];
            }
        }
    }
}

void BandedCholesky::solve_in_place(std::span<double> b) const {
    const std::size_t w = bw_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const double* li = &band_[i * w];
        double s = b[i];
        const std::size_t kmax = std::min(bw_, i);
        for (std::size_t k = 1; k <= kmax; ++k) s -= li[k] * b[i - k];
        b[i] = s / li[0];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
        const double x = b[ii] / band_[ii * w];
        b[ii] = x;
        const double* li = &band_[ii * w];
        const std::size_t kmax = std::min(bw_, ii);
        for (std::size_t k = 1; k <= kmax; ++k) b[ii - k] -= li[k] * x;
    }
}

CgResult conjugate_gradient(const SymmetricBandedMatrix& a, std::span<const double> b,
                            const Preconditioner& precond, double rel_tol, int max_iter,
                            std::span<const double> x0) {
    const std::size_t n = a.size();
    CgResult out;
    out.x.assign(n, 0.0);
    if (!x0.empty()) std::copy(x0.begin(), x0.end(), out.x.begin());

    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) {
        std::fill(out.x.begin(), out.x.end(), 0.0);
        out.residual_history.push_back(0.0);
        return out;
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    a.multiply(out.x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    auto norm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e * e;
        return std::sqrt(s);
    };
    double rel = norm(r) / bnorm;
    out.residual_history.push_back(rel);
    if (rel <= rel_tol) return out;

    precond(r, z);
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

    for (int it = 1; it <= max_iter; ++it) {
        a.multiply(p, q);
        double pq = 0.0;
        for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
        if (!(pq > 0.0)) {
            throw SolverFailure("conjugate gradient: breakdown (p^T A p <= 0)", out.residual_history);
        }
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        out.iterations = it;
        rel = norm(r) / bnorm;
        out.residual_history.push_back(rel);
        if (rel <= rel_tol) return out;

        precond(r, z);
        double rz_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) rz_new += r[i] * z[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverFailure("conjugate gradient: no convergence in " + std::to_string(max_iter) +
                            " iterations",
                        out.residual_history);
}

Preconditioner jacobi_preconditioner(const SymmetricBandedMatrix& a) {
    auto inv = std::make_shared<std::vector<double>>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) (*inv)[i] = 1.0 / a.at(i, i);
    return [inv](std::span<const double> r, std::span<double> z) {
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = (*inv)[i] * r[i];
    };
}

Preconditioner cholesky_preconditioner(const BandedCholesky& chol) {
    return [&chol](std::span<const double> r, std::span<double> z) {
        std::copy(r.begin(), r.end(), z.begin());
        chol.solve_in_place(z);
    };
}

}  // namespace egs
