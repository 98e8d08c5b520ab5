#include "egs/multiplicity.hpp"

#include "egs/errors.hpp"
#include "egs/log.hpp"
#include "egs/quadform.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <random>
#include <sstream>

namespace egs {

ConeField random_cone_init(const RadialProfile& profile, const GridPtr& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> ang(grid->J());
    for (double& v : ang) v = 0.2 + unif(rng);
    std::sort(ang.begin(), ang.end(), std::greater<>());
    return project_cone(Field::separable(grid, profile.values(), ang));
}

bool nonequivalence_check(const ConeField& a, const ConeField& b, double threshold) {
    if (a.grid().m() == b.grid().m()) throw InvalidArgument("nonequivalence_check: splittings must differ");
    if (a.grid().N() != b.grid().N()) throw InvalidArgument("nonequivalence_check: dimensions differ");
    const bool ra = symmetry_metric(a) <= threshold;
    const bool rb = symmetry_metric(b) <= threshold;
    return !(ra && rb);
}

double radiality_threshold_calibration(const ProblemSpec& spec, const GridPtr& grid, int iterations) {
    ProblemSpec s = spec;
    s.weight = spec.weight.is_radial() ? spec.weight : WeightSpec::constant(1.0);
    auto [profile, rep] = solve_radial(s, grid->radial());
    GroundStateOptions opt;
    opt.max_iter = iterations;
    auto [u, gs] = ground_state(s, grid, project_cone(radial_lift(profile, grid)), opt);
    return std::max(1e-4, 10.0 * gs.symmetry_metric);
}

namespace {

FamilyRecord solve_member(const ProblemSpec& base, int m, const FamilyOptions& opt,
                          const RadialProfile& profile) {
    FamilyRecord rec;
    rec.m = m;
    ProblemSpec spec = base;
    spec.m = m;
    try {
        spec.validate_for_2d();
    } catch (const InvalidArgument& e) {
        rec.error = std::string("range: ") + e.what();
        return rec;
    }
    try {
        const auto q = quadratic_form(profile, spec);
        rec.predicted_nonradial = q.predicted_nonradial;
        rec.suff_condition = q.suff_condition_holds;
    } catch (const Error& e) {
        log::warn(std::string("family: quadratic form unavailable: ") + e.what());
    }

    auto grid = Grid2D::make(profile.grid(), opt.J, m);
    GroundStateOptions gopt;
    gopt.tol = opt.tol;
    gopt.max_iter = opt.max_iter;
    gopt.epsilon = opt.epsilon;

    std::vector<ConeField> starts;
    {
        const auto pr = y_profile(opt.J, spec.N, m);
        std::vector<double> ang(opt.J);
        for (int j = 0; j < opt.J; ++j) ang[j] = 1.0 + opt.epsilon * pr.y[j];
        starts.push_back(project_cone(Field::separable(grid, profile.values(), ang)));
    }
    starts.push_back(random_cone_init(profile, grid, opt.seed * 1000003ULL + static_cast<std::uint64_t>(m)));

    std::string last_error;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        try {
            auto [u, rep] = ground_state(spec, grid, starts[k], gopt);
            rec.start_energies.push_back(rep.energy);
            if (!rec.ok || rep.energy < rec.energy) {
                rec.ok = true;
                rec.energy = rep.energy;
                rec.symmetry_metric = rep.symmetry_metric;
                rec.report = rep;
                rec.field = u;
                rec.best_start = static_cast<int>(k);
            }
        } catch (const Error& e) {
            rec.start_energies.push_back(std::numeric_limits<double>::quiet_NaN());
            last_error = e.what();
        }
    }
    if (!rec.ok) rec.error = "solver: " + last_error;
    return rec;
}

}  // namespace

FamilyResult run_family(const ProblemSpec& base, const std::vector<int>& m_list, const FamilyOptions& opt) {
    base.validate();
    if (!base.weight.is_radial()) throw PreconditionError("run_family: radial weight required");
    FamilyResult out;
    out.N = base.N;
    out.p = base.p;
    out.R = base.R;
    out.guaranteed_n = conditions_report(base.N, base.p, base.R).multiplicity;

    const auto rgrid = RadialGrid::uniform(base.N, base.R, base.r_max, opt.M);
    auto [profile, rrep] = solve_radial(base, rgrid);
    out.radial_energy = rrep.energy;

    if (opt.threshold > 0.0) {
        out.threshold = opt.threshold;
    } else {
        // any admissible splitting works; the lift is θ-constant for all of them
        ProblemSpec cal = base;
        cal.m = base.N - 1;
        out.threshold = radiality_threshold_calibration(cal, Grid2D::make(rgrid, opt.J, cal.m));
    }

    out.records.resize(m_list.size());
    if (opt.jobs <= 1) {
        for (std::size_t k = 0; k < m_list.size(); ++k) out.records[k] = solve_member(base, m_list[k], opt, profile);
    } else {
        std::size_t next = 0;
        std::vector<std::pair<std::size_t, std::future<FamilyRecord>>> running;
        while (next < m_list.size() || !running.empty()) {
            while (next < m_list.size() && running.size() < static_cast<std::size_t>(opt.jobs)) {
                running.emplace_back(next, std::async(std::launch::async, solve_member, std::cref(base),
                                                      m_list[next], std::cref(opt), std::cref(profile)));
                ++next;
            }
            out.records[running.front().first] = running.front().second.get();
            running.erase(running.begin());
        }
    }

    std::vector<int> nonradial_m;
    for (auto& r : out.records) {
        if (!r.ok) continue;
        r.nonradial = r.symmetry_metric > out.threshold;
        if (r.nonradial && std::find(nonradial_m.begin(), nonradial_m.end(), r.m) == nonradial_m.end()) {
            nonradial_m.push_back(r.m);
        }
        if (r.predicted_nonradial && r.energy > out.radial_energy) {
            out.flags.push_back("m=" + std::to_string(r.m) + ": predicted nonradial but energy above radial");
        }
    }
    const std::size_t n = out.records.size();
    out.distinct.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto &a = out.records[i], &b = out.records[j];
            if (i == j || !a.ok || !b.ok || a.m == b.m) continue;
            out.distinct[i][j] = nonequivalence_check(*a.field, *b.field, out.threshold);
        }
    }
    out.claimed_n = 1 + static_cast<int>(nonradial_m.size());
    if (out.claimed_n > out.guaranteed_n) out.flags.push_back("more nonradial solutions than guaranteed");
    std::ostringstream os;
    os << "family N=" << base.N << " p=" << base.p << " R=" << base.R << ": " << out.claimed_n
       << " nonequivalent solutions (guaranteed " << out.guaranteed_n << ")";
    log::info(os.str());
    return out;
}

}  // namespace egs
