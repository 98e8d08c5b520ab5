#include "egs/grid2d.hpp"

#include "egs/errors.hpp"
#include "egs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace egs {

Grid2D::Grid2D(RadialGrid radial, int J, int m)
    : radial_(std::move(radial)), J_(J), m_(m) {
    const int N = radial_.dimension();
    if (J_ < 2) throw InvalidArgument("Grid2D: J must be >= 2");
    if (m_ < 2 || m_ > N - 1) throw InvalidArgument("Grid2D: need 2 <= m <= N-1");
    dtheta_ = 0.5 * std::numbers::pi / J_;
    omega_ = omega_constant(N, m_);
    cell_weight_.resize(J_);
    for (int j = 0; j < J_; ++j) {
        cell_weight_[j] = integrate([&](double t) { return mu(t, N, m_); }, theta_face(j),
                                    theta_face(j + 1), 10);
    }
    face_mu_.resize(J_ + 1);
    for (int j = 0; j <= J_; ++j) face_mu_[j] = mu(theta_face(j), N, m_);
}

std::shared_ptr<const Grid2D> Grid2D::make(const ProblemSpec& spec, int M, int J) {
    return std::make_shared<const Grid2D>(RadialGrid::uniform(spec.N, spec.R, spec.r_max, M), J,
                                          spec.m);
}

std::shared_ptr<const Grid2D> Grid2D::make(RadialGrid radial, int J, int m) {
    return std::make_shared<const Grid2D>(std::move(radial), J, m);
}

double Grid2D::sector_weight(int j, double lo, double hi) const {
    const double a = std::max(lo, theta_face(j));
    const double b = std::min(hi, theta_face(j + 1));
    if (!(b > a)) return 0.0;
    if (a == theta_face(j) && b == theta_face(j + 1)) return omega_ * cell_weight_[j];
    return omega_ * integrate([&](double t) { return mu(t, N(), m_); }, a, b, 10);
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) throw InvalidArgument("Field: size does not match grid");
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidArgument("Field: non-finite value");
    }
    for (int j = 0; j < grid_->J(); ++j) {
        if (values_[grid_->index(0, j)] != 0.0 || values_[grid_->index(grid_->M(), j)] != 0.0) {
            throw InvalidArgument("Field: Dirichlet rows must vanish");
        }
    }
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void Field::scale(double t) {
    for (double& v : values_) v *= t;
}

std::vector<double> Field::interior() const {
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(grid_->index(1, 0));
    return {first, first + static_cast<std::ptrdiff_t>(grid_->interior_size())};
}

Field Field::from_interior(GridPtr grid, std::span<const double> x) {
    Field f(std::move(grid));
    if (x.size() != f.grid().interior_size()) throw InvalidArgument("Field: interior size mismatch");
    std::copy(x.begin(), x.end(), f.values_.begin() + static_cast<std::ptrdiff_t>(f.grid().index(1, 0)));
    return f;
}

Field Field::separable(GridPtr grid, std::span<const double> radial, std::span<const double> angular) {
    Field f(std::move(grid));
    const auto& g = f.grid();
    if (static_cast<int>(radial.size()) != g.M() + 1 || static_cast<int>(angular.size()) != g.J()) {
        throw InvalidArgument("Field::separable: size mismatch");
    }
    for (int i = 1; i < g.M(); ++i) {
        for (int j = 0; j < g.J(); ++j) f.at(i, j) = radial[i] * angular[j];
    }
    return f;
}

// ---------------------------------------------------------------------------

double ConeField::monotonicity_violation(const Field& field) {
    const auto& g = field.grid();
    double worst = 0.0;
    for (int i = 0; i <= g.M(); ++i) {
        for (int j = 0; j + 1 < g.J(); ++j) worst = std::max(worst, field(i, j + 1) - field(i, j));
    }
    return worst;
}

double ConeField::positivity_violation(const Field& field) {
    double worst = 0.0;
    for (double v : field.values()) worst = std::max(worst, -v);
    return worst;
}

ConeField ConeField::certify(Field field) {
    const double tol = 1e-12 * field.max_abs();
    if (positivity_violation(field) > 0.0) throw InvalidArgument("ConeField: negative value");
    if (monotonicity_violation(field) > tol) {
        throw InvalidArgument("ConeField: not nonincreasing in theta");
    }
    return ConeField(std::move(field));
}

ConeField ConeField::scaled(double t) const {
    if (!(t >= 0.0)) throw InvalidArgument("ConeField::scaled: factor must be nonnegative");
    Field f = field_;
    f.scale(t);
    return ConeField(std::move(f));
}

}  // namespace egs
