#pragma once

// Run configuration: one "key = value" per line, '#' starts a comment.
//
//   N, m, p            required
//   R                  inner radius (default 1, or √c for an affine domain)
//   r_max              truncation radius (default R + 25)
//   weight             constant c | radial-exp c0 c1 | table r:a ... |
//                      separable c0 c1 ; θ:f ...          (default constant 1)
//   domain             ball | affine κ c                  (default ball)
//   solver.tol         1e-7        solver.max_iter   20000
//   grid.M, grid.J     512, 64     grid.S            256 (A_g cells per side)
//   radial.M           4096
//   init.epsilon       0.3         init.kind         perturbed | random | radial
//   family.m           list of splittings (default: admissible ones)
//   sweep.R, sweep.p   lists "a b c" or ranges "start:stop:step"
//   sweep.solve2d      true | false (default false)
//   seed               1           out               .

#include "egs/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace egs::cli {

struct RunConfig {
    ProblemSpec spec;
    double tol = 1e-7;
    int max_iter = 20000;
    int M = 512, J = 64, S = 256;
    int radial_M = 4096;
    double epsilon = 0.3;
    std::string init_kind = "perturbed";
    std::vector<int> family_m;
    std::vector<double> sweep_R, sweep_p;
    bool sweep_solve2d = false;
    std::uint64_t seed = 1;
    std::string out = ".";

    /// Canonical text of the effective configuration (after overrides).
    std::string canonical() const;
    /// FNV-1a of canonical(), as 16 hex digits.
    std::string hash() const;
};

/// Parses and validates. Throws ConfigError with the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Parses "MxJ".
std::pair<int, int> parse_grid(const std::string& text);

}  // namespace egs::cli
