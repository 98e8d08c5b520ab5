#pragma once

// Ground states for several block splittings m of the same (N, p, R) and the
// counting of rotationally nonequivalent solutions.

#include "egs/solver2d.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace egs {

struct FamilyOptions {
    int M = 512, J = 64;
    double tol = 1e-7;
    int max_iter = 20000;
    double epsilon = 0.3;
    std::uint64_t seed = 1;
    int jobs = 1;
    /// Radial/nonradial classifier; 0 runs radiality_threshold_calibration.
    double threshold = 0.0;
};

struct FamilyRecord {
    int m = 0;
    bool ok = false;
    std::string error;              ///< why the entry failed (range, solver)
    double energy = 0.0;
    double symmetry_metric = 0.0;
    bool nonradial = false;          ///< metric above the threshold
    bool predicted_nonradial = false;  ///< sign of the radial quadratic form
    bool suff_condition = false;
    std::vector<double> start_energies;  ///< perturbed-radial start, random start
    int best_start = -1;
    SolveReport report;
    std::optional<ConeField> field;
};

struct FamilyResult {
    int N = 0;
    double p = 0.0, R = 0.0;
    double radial_energy = 0.0;
    double threshold = 0.0;
    std::vector<FamilyRecord> records;
    /// distinct[i][j]: records i and j are rotationally nonequivalent.
    std::vector<std::vector<bool>> distinct;
    int claimed_n = 1;     ///< radial solution plus the nonradial records
    int guaranteed_n = 1;  ///< conditions_report(N, p, R).multiplicity
    std::vector<std::string> flags;
};

/// Runs the radial solve and a two-start ground_state for each m. Failures
/// are recorded per entry and never abort the family.
FamilyResult run_family(const ProblemSpec& base, const std::vector<int>& m_list, const FamilyOptions& options = {});

/// Fields at different splittings can only be rotations of each other when
/// both are radial. Mixed pairs are nonequivalent.
bool nonequivalence_check(const ConeField& a, const ConeField& b, double threshold = 1e-4);

/// 10 × the symmetry metric of a θ-constant-initialized solve, floored at 1e-4.
double radiality_threshold_calibration(const ProblemSpec& spec, const GridPtr& grid, int iterations = 200);

/// A random θ-nonincreasing angular factor times the radial profile.
ConeField random_cone_init(const RadialProfile& profile, const GridPtr& grid, std::uint64_t seed);

}  // namespace egs
