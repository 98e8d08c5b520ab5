#pragma once

// Symmetric banded storage, a band Cholesky factorization and preconditioned
// conjugate gradients. The discrete H^1 operators in this library are SPD
// with bandwidth equal to the number of angular (or t) cells.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace egs {

class SymmetricBandedMatrix {
public:
    SymmetricBandedMatrix() = default;
    SymmetricBandedMatrix(std::size_t n, std::size_t bandwidth);

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return bw_; }

    /// Entry (i, j) with |i - j| <= bandwidth; either triangle may be addressed.
    double& at(std::size_t i, std::size_t j);
    double at(std::size_t i, std::size_t j) const;
    /// Adds v to both (i, j) and (j, i) (once when i == j).
    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    void multiply(std::span<const double> x, std::span<double> y) const;
    double quadratic_form(std::span<const double> x) const;

private:
    std::size_t n_ = 0, bw_ = 0;
    std::vector<double> band_;  // row-major lower band, band_[i*(bw+1) + (i-j)]
};

/// A = L L^T for a symmetric positive definite banded A. Throws SolverFailure
/// when a pivot is not positive.
class BandedCholesky {
public:
    BandedCholesky() = default;
    explicit BandedCholesky(const SymmetricBandedMatrix& a);

    std::size_t size() const { return n_; }
    void solve_in_place(std::span<double> b) const;

private:
    std::size_t n_ = 0, bw_ = 0;
    std::vector<double> band_;
};

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    /// ||r_k|| / ||b|| per iteration, starting with the initial residual.
    std::vector<double> residual_history;
};

using Preconditioner = std::function<void(std::span<const double> r, std::span<double> z)>;

/// Preconditioned CG for A x = b, stopping at ||r|| <= rel_tol ||b||.
/// Throws SolverFailure (with the residual history) if max_iter is reached.
CgResult conjugate_gradient(const SymmetricBandedMatrix& a, std::span<const double> b,
                            const Preconditioner& precond, double rel_tol, int max_iter,
                            std::span<const double> x0 = {});

Preconditioner jacobi_preconditioner(const SymmetricBandedMatrix& a);
Preconditioner cholesky_preconditioner(const BandedCholesky& chol);

}  // namespace egs
