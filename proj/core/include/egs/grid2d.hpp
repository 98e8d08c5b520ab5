#pragma once

#include "egs/radial.hpp"

#include <memory>
#include <span>
#include <vector>

namespace egs {

/// Tensor grid in (r, θ): vertex-centred radial nodes (Dirichlet at both ends)
/// and J cell-centred angular nodes strictly inside (0, π/2).
class Grid2D {
public:
    Grid2D(RadialGrid radial, int J, int m);
    static std::shared_ptr<const Grid2D> make(const ProblemSpec& spec, int M, int J);
    static std::shared_ptr<const Grid2D> make(RadialGrid radial, int J, int m);

    const RadialGrid& radial() const { return radial_; }
    int N() const { return radial_.dimension(); }
    int m() const { return m_; }
    int M() const { return radial_.intervals(); }
    int J() const { return J_; }
    double dtheta() const { return dtheta_; }
    double theta(int j) const { return (j + 0.5) * dtheta_; }
    /// Angle of the face between cells j-1 and j (face 0 is θ = 0, face J is π/2).
    double theta_face(int j) const { return j * dtheta_; }
    /// ∫ μ over angular cell j.
    double cell_weight(int j) const { return cell_weight_[j]; }
    /// μ at the face between cells j-1 and j.
    double face_mu(int j) const { return face_mu_[j]; }
    double omega() const { return omega_; }

    std::size_t size() const { return static_cast<std::size_t>(M() + 1) * J_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * J_ + j; }
    /// Number of unknowns (interior radial rows only).
    std::size_t interior_size() const { return static_cast<std::size_t>(M() - 1) * J_; }

    /// ω_{N,m} ∫_{sector} μ for the part of cell j inside [lo, hi].
    double sector_weight(int j, double lo, double hi) const;

private:
    RadialGrid radial_;
    int J_, m_;
    double dtheta_, omega_;
    std::vector<double> cell_weight_, face_mu_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

/// Nodal values u_{ij} on a Grid2D, row-major in r, zero on the Dirichlet rows.
class Field {
public:
    explicit Field(GridPtr grid);
    Field(GridPtr grid, std::vector<double> values);

    const Grid2D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
    double& at(int i, int j) { return values_[grid_->index(i, j)]; }
    std::span<double> row(int i) { return {values_.data() + grid_->index(i, 0), std::size_t(grid_->J())}; }
    std::span<const double> row(int i) const {
        return {values_.data() + grid_->index(i, 0), std::size_t(grid_->J())};
    }

    double max_abs() const;
    void scale(double t);

    std::vector<double> interior() const;
    static Field from_interior(GridPtr grid, std::span<const double> x);

    /// u(r_i, θ_j) = f(r_i) g(θ_j).
    static Field separable(GridPtr grid, std::span<const double> radial, std::span<const double> angular);

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// A Field certified to lie in the discrete cone: u >= 0 and nonincreasing in θ
/// up to tol_mono = 1e-12 max u.
class ConeField {
public:
    /// Throws InvalidArgument if `field` violates the cone constraints.
    static ConeField certify(Field field);
    /// Largest violation max_{ij} (u_{i,j+1} - u_{ij})_+ and max (-u)_+.
    static double monotonicity_violation(const Field& field);
    static double positivity_violation(const Field& field);

    const Field& field() const { return field_; }
    operator const Field&() const { return field_; }
    const Grid2D& grid() const { return field_.grid(); }
    ConeField scaled(double t) const;

private:
    explicit ConeField(Field f) : field_(std::move(f)) {}
    Field field_;
};

}  // namespace egs
