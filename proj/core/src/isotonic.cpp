#include "egs/isotonic.hpp"

#include "egs/errors.hpp"

#include <algorithm>
#include <vector>

namespace egs {

void isotonic_nonincreasing(std::span<double> values, std::span<const double> weights) {
    const std::size_t n = values.size();
    if (weights.size() != n) throw InvalidArgument("isotonic: size mismatch");
    if (n < 2) return;

    struct Block {
        double mean;
        double weight;
        std::size_t end;  // one past the last index
    };
    std::vector<Block> stack;
    stack.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[i] > 0.0)) throw InvalidArgument("isotonic: weights must be positive");
        Block b{values[i], weights[i], i + 1};
        // A violation is an increase: the new block's mean exceeds its predecessor.
        while (!stack.empty() && stack.back().mean < b.mean) {
            const Block& top = stack.back();
            const double w = top.weight + b.weight;
            b.mean = (top.weight * top.mean + b.weight * b.mean) / w;
            b.weight = w;
            stack.pop_back();
        }
        stack.push_back(b);
    }
    std::size_t start = 0;
    for (const Block& b : stack) {
        std::fill(values.begin() + static_cast<std::ptrdiff_t>(start),
                  values.begin() + static_cast<std::ptrdiff_t>(b.end), b.mean);
        start = b.end;
    }
}

void project_monotone_cone(std::span<double> values, std::span<const double> weights) {
    isotonic_nonincreasing(values, weights);
    for (double& v : values) v = std::max(v, 0.0);
}

}  // namespace egs
