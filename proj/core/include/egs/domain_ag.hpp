#pragma once

// The reduced functional on A_g = { s² + g(t²) > 0 }, discretized on a
// cell-centred (s, t) grid over [0, L]² with measure ω s^{m−1} t^{N−m−1}.
// Cells with s² + g(t²) <= 0 are held at zero; faces cut by the boundary use
// the distance to the boundary (first order accurate there).

#include "egs/descent.hpp"
#include "egs/geometry.hpp"
#include "egs/report.hpp"

#include <memory>
#include <vector>

namespace egs {

class AgGrid {
public:
    AgGrid(int N, int m, AffineG g, int cells, double L);

    int N() const { return N_; }
    int m() const { return m_; }
    const AffineG& g() const { return g_; }
    int cells() const { return n_; }
    double L() const { return L_; }
    double h() const { return h_; }
    double s(int a) const { return (a + 0.5) * h_; }
    double t(int b) const { return (b + 0.5) * h_; }
    std::size_t index(int a, int b) const { return static_cast<std::size_t>(a) * n_ + b; }
    bool active(int a, int b) const { return unknown_[index(a, b)] >= 0; }
    /// Position of cell (a, b) among the unknowns, or −1 when masked.
    long unknown(int a, int b) const { return unknown_[index(a, b)]; }
    std::size_t unknowns() const { return active_.size(); }
    /// (a, b) of unknown k.
    std::pair<int, int> cell(std::size_t k) const { return active_[k]; }
    /// ∫ s^{m−1} t^{N−m−1} over cell (a, b).
    double cell_weight(int a, int b) const;

private:
    int N_, m_;
    AffineG g_;
    int n_;
    double L_, h_;
    std::vector<long> unknown_;
    std::vector<std::pair<int, int>> active_;
    std::vector<double> sw_, tw_;
};

struct AgOptions {
    int cells = 256;        ///< cells per side of [0, L]²
    double L = 0.0;         ///< 0 selects √c + 15
    double tol = 1e-7;
    int max_iter = 20000;
    double epsilon = 0.3;
    double min_cut_fraction = 0.05;  ///< lower clamp on boundary distance / h
    /// Relative θ-monotonicity violation (on polar resampling rings) below
    /// which the cone correction is skipped.
    double cone_threshold = 1e-3;
    int radial_M = 2048;   ///< radial solve used for the initial guess
};

struct AgSolution {
    std::shared_ptr<const AgGrid> grid;
    std::vector<double> values;  ///< cells × cells, row-major in s, zero on masked cells
    SolveReport report;
    double ring_violation = 0.0;  ///< final relative θ-monotonicity violation
};

/// Ground state on A_g. spec.domain must be DoubleRevolution.
/// Throws EmptyDomain when the mask leaves no unknowns.
AgSolution solve_on_Ag(const ProblemSpec& spec, const AgOptions& options = {});

}  // namespace egs
