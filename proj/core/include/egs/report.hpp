#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace egs {

/// Outcome of a nonlinear solve (radial Newton, 2D cone descent, A_g descent).
struct SolveReport {
    bool converged = false;
    double energy = 0.0;
    /// |‖u‖²_{H¹} - ∫ a|u|^p| / ‖u‖²_{H¹}
    double nehari_residual = 0.0;
    /// Relative strong-form residual (radial) or relative H¹ fixed-point step (2D).
    double residual_norm = 0.0;
    double projected_grad_norm = 0.0;
    double symmetry_metric = 0.0;
    int iterations = 0;
    int linear_iterations = 0;
    /// k -> (lhs, rhs) of the angular tail inequality.
    std::map<int, std::pair<double, double>> tail_bounds;
    std::vector<double> energy_history;
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const {
        for (const auto& x : flags) {
            if (x == f) return true;
        }
        return false;
    }
};

}  // namespace egs
