#pragma once

#include "egs/geometry.hpp"
#include "egs/multiplicity.hpp"
#include "egs/quadform.hpp"
#include "egs/report.hpp"
#include "egs_cli/config.hpp"

#include <json.hpp>

#include <string>

namespace egs::cli {

using Json = nlohmann::ordered_json;

/// Config hash, problem parameters, grid sizes and tolerances.
Json envelope(const RunConfig& config, const std::string& command);

void add_report(Json& j, const SolveReport& r, const std::string& prefix = "");
void add_quadform(Json& j, const QuadFormReport& q);
void add_conditions(Json& j, const ExponentTable& t);
void add_family(Json& j, const FamilyResult& f);

/// Columns: m,energy,symmetry_metric,verdict
std::string family_csv(const FamilyResult& f);

inline constexpr const char* sweep_columns =
    "R,p,R_star,suff_condition,predicted_nonradial,raw_value,radial_energy,energy_2d,symmetry_metric_2d,status";

}  // namespace egs::cli
