#include "egs_cli/commands.hpp"

#include "egs/domain_ag.hpp"
#include "egs/errors.hpp"
#include "egs/io.hpp"
#include "egs/log.hpp"
#include "egs/multiplicity.hpp"
#include "egs/quadform.hpp"
#include "egs/radial.hpp"
#include "egs/solver2d.hpp"
#include "egs_cli/config.hpp"
#include "egs_cli/reports.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace egs::cli {

namespace {

namespace fs = std::filesystem;

constexpr int exit_ok = 0, exit_config = 1, exit_solver = 2;

std::string path_in(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.out);
    return (fs::path(c.out) / name).string();
}

void emit(const RunConfig& c, const std::string& name, const Json& j, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    write_file(path_in(c, name), text);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_radial_weight(const RunConfig& c) {
    if (!c.spec.weight.is_radial()) throw ConfigError(0, "this command needs a radial weight");
}

void require_ball(const RunConfig& c) {
    if (!c.spec.domain.is_ball()) throw ConfigError(0, "this command needs domain = ball");
}

std::pair<RadialProfile, SolveReport> radial_solve(const RunConfig& c) {
    return solve_radial(c.spec, RadialGrid::uniform(c.spec.N, c.spec.R, c.spec.r_max, c.radial_M));
}

int cmd_radial(const RunConfig& c, std::ostream& out) {
    require_radial_weight(c);
    require_ball(c);
    auto [profile, rep] = radial_solve(c);
    std::ostringstream os;
    write_profile(os, profile);
    write_file(path_in(c, "radial_profile.txt"), os.str());
    Json j = envelope(c, "radial");
    add_report(j, rep);
    const auto h = hardy_check(profile, c.spec);
    j["hardy_lhs"] = h.lhs;
    j["hardy_rhs"] = h.rhs;
    j["hardy_ratio"] = h.ratio;
    emit(c, "radial_report.json", j, out);
    return exit_ok;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    require_radial_weight(c);
    require_ball(c);
    auto [profile, rep] = radial_solve(c);
    Json j = envelope(c, "analyze");
    j["radial_energy"] = rep.energy;
    j["radial_nehari_residual"] = rep.nehari_residual;
    add_quadform(j, quadratic_form(profile, c.spec));
    add_conditions(j, conditions_report(c.spec.N, c.spec.p, c.spec.R));
    const std::vector<double> s = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    const auto pt = nehari_perturbation_test(profile, c.spec, s, c.J);
    double best = pt.points.front().energy, best_s = 0.0;
    for (const auto& q : pt.points) {
        if (q.energy < best) best = q.energy, best_s = q.s;
    }
    j["perturbation_reference_energy"] = pt.radial_energy;
    j["perturbation_min_energy"] = best;
    j["perturbation_best_s"] = best_s;
    j["perturbation_lowered"] = pt.lowered;
    j["perturbation_discretization_warning"] = pt.discretization_warning;
    emit(c, "analyze_report.json", j, out);
    return exit_ok;
}

int cmd_solve2d(const RunConfig& c, std::ostream& out) {
    try {
        c.spec.validate_for_2d();
    } catch (const InvalidArgument& e) {
        throw ConfigError(0, e.what());
    }
    Json j = envelope(c, "solve2d");
    if (!c.spec.domain.is_ball()) {
        AgOptions o;
        o.cells = c.S;
        o.tol = c.tol;
        o.max_iter = c.max_iter;
        o.epsilon = c.epsilon;
        const auto sol = solve_on_Ag(c.spec, o);
        std::ostringstream os;
        write_ag_field(os, sol, c.spec.p);
        write_file(path_in(c, "field_ag.txt"), os.str());
        add_report(j, sol.report);
        j["L"] = sol.grid->L();
        j["ring_violation"] = sol.ring_violation;
        emit(c, "solve2d_report.json", j, out);
        return sol.report.converged ? exit_ok : exit_solver;
    }

    auto grid = Grid2D::make(c.spec, c.M, c.J);
    std::optional<ConeField> init;
    std::optional<double> radial_energy;
    if (c.spec.weight.is_radial()) {
        auto [profile, rrep] = solve_radial(c.spec, grid->radial());
        radial_energy = rrep.energy;
        if (c.init_kind == "random") init = random_cone_init(profile, grid, c.seed);
        if (c.init_kind == "radial") init = project_cone(radial_lift(profile, grid));
    } else if (c.init_kind != "perturbed") {
        throw ConfigError(0, "init.kind " + c.init_kind + " needs a radial weight");
    }
    GroundStateOptions o;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.epsilon = c.epsilon;
    auto [u, rep] = ground_state(c.spec, grid, init, o);
    std::ostringstream os;
    write_field(os, u.field(), c.spec.p);
    write_file(path_in(c, "field.txt"), os.str());
    add_report(j, rep);
    if (radial_energy) j["radial_energy"] = *radial_energy;
    emit(c, "solve2d_report.json", j, out);
    return rep.converged ? exit_ok : exit_solver;
}

int cmd_family(const RunConfig& c, int jobs, std::ostream& out) {
    require_radial_weight(c);
    require_ball(c);
    std::vector<int> ms = c.family_m;
    if (ms.empty()) {
        const auto t = conditions_report(c.spec.N, c.spec.p, c.spec.R);
        ms = t.admissible_m.empty() ? t.existence_m : t.admissible_m;
    }
    FamilyOptions o;
    o.M = c.M;
    o.J = c.J;
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.epsilon = c.epsilon;
    o.seed = c.seed;
    o.jobs = jobs;
    const auto f = run_family(c.spec, ms, o);
    write_file(path_in(c, "family.csv"), family_csv(f));
    Json j = envelope(c, "family");
    add_family(j, f);
    emit(c, "family.json", j, out);
    for (const auto& r : f.records) {
        if (!r.ok && r.error.rfind("solver", 0) == 0) return exit_solver;
    }
    return exit_ok;
}

int cmd_check_conditions(const RunConfig& c, std::ostream& out) {
    Json j = envelope(c, "check-conditions");
    add_conditions(j, conditions_report(c.spec.N, c.spec.p, c.spec.R));
    emit(c, "conditions.json", j, out);
    return exit_ok;
}

/// Writes rows in index order as soon as they are contiguous; one lock.
class RowWriter {
public:
    RowWriter(std::ostream& os, std::size_t total) : os_(os), total_(total) {}
    void put(std::size_t index, std::string row) {
        std::lock_guard<std::mutex> lock(mu_);
        ready_[index] = std::move(row);
        while (!ready_.empty() && ready_.begin()->first == next_) {
            os_ << ready_.begin()->second << '\n';
            os_.flush();
            ready_.erase(ready_.begin());
            ++next_;
        }
    }
    bool complete() const { return next_ == total_; }

private:
    std::ostream& os_;
    std::size_t total_, next_ = 0;
    std::map<std::size_t, std::string> ready_;
    std::mutex mu_;
};

int cmd_sweep(const RunConfig& c, int jobs, std::ostream& out) {
    require_radial_weight(c);
    require_ball(c);
    const std::vector<double> Rs = c.sweep_R.empty() ? std::vector<double>{c.spec.R} : c.sweep_R;
    const std::vector<double> ps = c.sweep_p.empty() ? std::vector<double>{c.spec.p} : c.sweep_p;
    std::vector<std::pair<double, double>> cases;
    for (double R : Rs) {
        for (double p : ps) cases.emplace_back(R, p);
    }
    const double span = c.spec.r_max - c.spec.R;

    std::ofstream csv(path_in(c, "sweep.csv"), std::ios::binary);
    if (!csv) throw Error("cannot open sweep.csv");
    csv << sweep_columns << '\n';
    csv.flush();
    RowWriter writer(csv, cases.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < cases.size();) {
            const auto [R, p] = cases[k];
            ProblemSpec s = c.spec;
            s.R = R;
            s.p = p;
            s.r_max = R + span;
            s.domain = DomainSpec(ExteriorBall{R});
            std::ostringstream row;
            row << fmt(R) << ',' << fmt(p) << ',' << fmt(r_star(s.N, p)) << ','
                << (suff_condition(s.N, s.m, p, R) ? "true" : "false") << ',';
            std::string status = "ok";
            try {
                const auto grid = RadialGrid::uniform(s.N, R, s.r_max, c.radial_M);
                auto [profile, rrep] = solve_radial(s, grid);
                const auto q = quadratic_form(profile, s);
                row << (q.predicted_nonradial ? "true" : "false") << ',' << fmt(q.raw_value) << ','
                    << fmt(rrep.energy) << ',';
                if (c.sweep_solve2d && critical_exponent(s.N - s.m + 1) > p) {
                    try {
                        GroundStateOptions o;
                        o.tol = c.tol;
                        o.max_iter = c.max_iter;
                        o.epsilon = c.epsilon;
                        auto [u, rep] = ground_state(s, Grid2D::make(s, c.M, c.J), std::nullopt, o);
                        row << fmt(rep.energy) << ',' << fmt(rep.symmetry_metric);
                        if (!rep.converged) status = "2d-not-converged";
                    } catch (const Error& e) {
                        row << ',';
                        status = "2d-failed";
                    }
                } else {
                    row << ',';
                }
            } catch (const Error& e) {
                row << ",,,,";
                status = "radial-failed";
            }
            if (status != "ok") failed = true;
            row << ',' << status;
            writer.put(k, row.str());
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cases.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    Json j = envelope(c, "sweep");
    j["rows"] = cases.size();
    j["columns"] = sweep_columns;
    j["csv"] = path_in(c, "sweep.csv");
    out << j.dump(2) << "\n";
    return failed ? exit_solver : exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    log::set_level(log::level_from_env());

    CLI::App app{"egs: ground states of -Δu + u = a(x) u^{p-1} on exterior domains, computed in the cone of\n"
                 "O(m)xO(N-m)-invariant, θ-nonincreasing functions. Environment: SOLVER_LOG=quiet|info|debug."};
    app.fallthrough();
    app.require_subcommand(1);
    std::string config_path, out_dir, grid, seed, tol;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides 'out')");
    app.add_option("--jobs", jobs, "worker threads for family and sweep (default: processors)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed (overrides 'seed')");
    app.add_option("--grid", grid, "2D grid as MxJ (overrides grid.M, grid.J)");
    app.add_option("--tol", tol, "solver tolerance (overrides solver.tol)");

    auto* radial = app.add_subcommand("radial", "radial profile (radial_profile.txt) and report");
    auto* analyze = app.add_subcommand("analyze", "quadratic form at the radial solution, R*, 2*_n table");
    auto* solve2d = app.add_subcommand("solve2d", "cone ground state (field.txt or field_ag.txt) and report");
    auto* family = app.add_subcommand("family", "ground states for each splitting m (family.json, family.csv)");
    auto* check = app.add_subcommand("check-conditions", "exponent table and guaranteed multiplicity");
    auto* sweep = app.add_subcommand("sweep", "one CSV row per (R, p) in sweep.R x sweep.p (sweep.csv)");
    sweep->footer(std::string("sweep.csv columns: ") + sweep_columns +
                  "\n  R, p           sweep point\n"
                  "  R_star         threshold radius R*(N, p)\n"
                  "  suff_condition 2 + 2N/(((N-2)/2)^2 + R^2) <= p < 2*_{N-m+1}\n"
                  "  predicted_nonradial  sign of the quadratic form at the radial solution (< 0)\n"
                  "  raw_value      quadratic form value\n"
                  "  radial_energy  energy of the radial solution\n"
                  "  energy_2d, symmetry_metric_2d  cone ground state (empty unless sweep.solve2d = true)\n"
                  "  status         ok | radial-failed | 2d-failed | 2d-not-converged");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        // subcommand --help lands here too
        if (e.get_exit_code() == 0) {
            for (auto* sub : app.get_subcommands()) out << sub->help();
            if (app.get_subcommands().empty()) out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        RunConfig c = load_config(config_path);
        if (!out_dir.empty()) c.out = out_dir;
        if (!grid.empty()) std::tie(c.M, c.J) = parse_grid(grid);
        if (!seed.empty()) {
            try {
                c.seed = std::stoull(seed);
            } catch (const std::exception&) {
                throw ConfigError(0, "--seed expects a nonnegative integer");
            }
        }
        if (!tol.empty()) {
            try {
                c.tol = std::stod(tol);
            } catch (const std::exception&) {
                throw ConfigError(0, "--tol expects a number");
            }
            if (!(c.tol > 0.0)) throw ConfigError(0, "--tol must be > 0");
        }

        if (radial->parsed()) return cmd_radial(c, out);
        if (analyze->parsed()) return cmd_analyze(c, out);
        if (solve2d->parsed()) return cmd_solve2d(c, out);
        if (family->parsed()) return cmd_family(c, jobs, out);
        if (check->parsed()) return cmd_check_conditions(c, out);
        if (sweep->parsed()) return cmd_sweep(c, jobs, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const NoConvergence& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const DegenerateDirection& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}

}  // namespace egs::cli
