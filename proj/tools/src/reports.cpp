#include "egs_cli/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace egs::cli {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Json envelope(const RunConfig& c, const std::string& command) {
    Json j;
    j["command"] = command;
    j["config_hash"] = c.hash();
    j["N"] = c.spec.N;
    j["m"] = c.spec.m;
    j["p"] = c.spec.p;
    j["R"] = c.spec.R;
    j["r_max"] = c.spec.r_max;
    j["weight"] = c.spec.weight.describe();
    j["domain"] = c.spec.domain.describe();
    j["grid_M"] = c.M;
    j["grid_J"] = c.J;
    j["grid_S"] = c.S;
    j["radial_M"] = c.radial_M;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["radial_tol"] = 1e-10;
    j["cg_rel_tol"] = 1e-10;
    j["seed"] = c.seed;
    return j;
}

void add_report(Json& j, const SolveReport& r, const std::string& pre) {
    j[pre + "converged"] = r.converged;
    j[pre + "energy"] = number(r.energy);
    j[pre + "nehari_residual"] = number(r.nehari_residual);
    j[pre + "residual_norm"] = number(r.residual_norm);
    j[pre + "projected_grad_norm"] = number(r.projected_grad_norm);
    j[pre + "symmetry_metric"] = number(r.symmetry_metric);
    j[pre + "iterations"] = r.iterations;
    j[pre + "linear_iterations"] = r.linear_iterations;
    for (const auto& [k, lr] : r.tail_bounds) {
        j[pre + "tail_bound_" + std::to_string(k) + "_lhs"] = number(lr.first);
        j[pre + "tail_bound_" + std::to_string(k) + "_rhs"] = number(lr.second);
    }
    j[pre + "flags"] = join(r.flags);
}

void add_quadform(Json& j, const QuadFormReport& q) {
    j["raw_value"] = q.raw_value;
    j["reduced_value"] = q.reduced_value;
    j["hardy_bound_value"] = q.hardy_bound_value;
    j["predicted_nonradial"] = q.predicted_nonradial;
    j["suff_condition_holds"] = q.suff_condition_holds;
    j["int_grad2"] = q.gradient;
    j["int_u2"] = q.mass;
    j["int_a_up"] = q.nonlinear;
    j["int_u2_over_r2"] = q.hardy;
    j["int_y2_mu"] = q.y2;
    j["int_dy2_mu"] = q.dy2;
}

void add_conditions(Json& j, const ExponentTable& t) {
    j["R_star"] = t.R_star;
    for (const auto& [n, e] : t.critical_exponents) {
        j["two_star_" + std::to_string(n)] = e.is_finite() ? Json(e.value()) : Json("inf");
    }
    j["multiplicity"] = t.multiplicity;
    std::string adm, ex;
    for (int m : t.admissible_m) adm += (adm.empty() ? "" : ",") + std::to_string(m);
    for (int m : t.existence_m) ex += (ex.empty() ? "" : ",") + std::to_string(m);
    j["admissible_m"] = adm;
    j["existence_m"] = ex;
    j["radius_hypothesis"] = t.radius_hypothesis;
    j["two_solutions_any_radius"] = t.two_solutions_any_radius;
    j["n_solutions_any_radius"] = t.n_solutions_any_radius;
}

void add_family(Json& j, const FamilyResult& f) {
    j["radial_energy"] = f.radial_energy;
    j["threshold"] = f.threshold;
    j["claimed_n"] = f.claimed_n;
    j["guaranteed_n"] = f.guaranteed_n;
    j["flags"] = join(f.flags);
    Json recs = Json::array();
    for (const auto& r : f.records) {
        Json e;
        e["m"] = r.m;
        e["ok"] = r.ok;
        e["error"] = r.error;
        e["energy"] = number(r.energy);
        e["symmetry_metric"] = number(r.symmetry_metric);
        e["nonradial"] = r.nonradial;
        e["predicted_nonradial"] = r.predicted_nonradial;
        e["suff_condition"] = r.suff_condition;
        Json se = Json::array();
        for (double v : r.start_energies) se.push_back(number(v));
        e["start_energies"] = se;
        e["best_start"] = r.best_start;
        if (r.ok) add_report(e, r.report, "report_");
        recs.push_back(e);
    }
    j["records"] = recs;
    Json d = Json::array();
    for (const auto& row : f.distinct) {
        Json jr = Json::array();
        for (bool b : row) jr.push_back(b);
        d.push_back(jr);
    }
    j["distinct"] = d;
}

std::string family_csv(const FamilyResult& f) {
    std::ostringstream os;
    os << "m,energy,symmetry_metric,verdict\n";
    os << "radial," << fmt(f.radial_energy) << ",0,radial\n";
    for (const auto& r : f.records) {
        os << r.m << ',';
        if (r.ok) {
            os << fmt(r.energy) << ',' << fmt(r.symmetry_metric) << ',' << (r.nonradial ? "nonradial" : "radial");
        } else {
            os << ",,failed";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace egs::cli
