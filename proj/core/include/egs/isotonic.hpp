#pragma once

#include <span>

namespace egs {

/// Weighted least-squares projection of `values` onto nonincreasing sequences
/// (pool-adjacent-violators), in place. Weights must be positive.
void isotonic_nonincreasing(std::span<double> values, std::span<const double> weights);

/// Nearest nonincreasing, nonnegative sequence in the weighted metric:
/// isotonic regression followed by clamping at zero.
void project_monotone_cone(std::span<double> values, std::span<const double> weights);

}  // namespace egs
