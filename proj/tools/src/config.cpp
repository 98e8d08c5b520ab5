#include "egs_cli/config.hpp"

#include "egs/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace egs::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

double to_double(const std::string& s, int line, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError(line, "malformed number '" + s + "' for " + key);
    }
    return v;
}

long to_int(const std::string& s, int line, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw ConfigError(line, "malformed integer '" + s + "' for " + key);
    return v;
}

bool to_bool(const std::string& s, int line, const std::string& key) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError(line, "expected true or false for " + key);
}

/// "a b c" or "start:stop:step" (inclusive).
std::vector<double> to_list(const std::string& s, int line, const std::string& key) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
        if (parts.size() != 3) throw ConfigError(line, key + ": range must be start:stop:step");
        const double a = to_double(parts[0], line, key), b = to_double(parts[1], line, key),
                     h = to_double(parts[2], line, key);
        if (!(h > 0.0) || b < a) throw ConfigError(line, key + ": need step > 0 and stop >= start");
        const long n = std::lround(std::floor((b - a) / h + 1e-9));
        for (long k = 0; k <= n; ++k) out.push_back(a + k * h);
        return out;
    }
    for (const auto& w : words(s)) out.push_back(to_double(w, line, key));
    if (out.empty()) throw ConfigError(line, key + ": empty list");
    return out;
}

std::vector<std::pair<double, double>> to_pairs(const std::vector<std::string>& ws, std::size_t from, int line,
                                                const std::string& key) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = from; k < ws.size(); ++k) {
        const auto colon = ws[k].find(':');
        if (colon == std::string::npos) throw ConfigError(line, key + ": expected x:value pairs");
        out.emplace_back(to_double(ws[k].substr(0, colon), line, key),
                         to_double(ws[k].substr(colon + 1), line, key));
    }
    if (out.empty()) throw ConfigError(line, key + ": empty table");
    return out;
}

WeightSpec parse_weight(const std::string& v, int line) {
    const auto semi = v.find(';');
    const auto ws = words(semi == std::string::npos ? v : v.substr(0, semi));
    if (ws.empty()) throw ConfigError(line, "weight: missing kind");
    const std::string& kind = ws[0];
    if (kind == "constant") {
        if (ws.size() != 2) throw ConfigError(line, "weight: usage 'constant c'");
        return WeightSpec(ConstantWeight{to_double(ws[1], line, "weight")});
    }
    if (kind == "radial-exp") {
        if (ws.size() != 3) throw ConfigError(line, "weight: usage 'radial-exp c0 c1'");
        return WeightSpec(RadialExponentialWeight{to_double(ws[1], line, "weight"), to_double(ws[2], line, "weight")});
    }
    if (kind == "table") return WeightSpec(TabulatedRadialWeight{to_pairs(ws, 1, line, "weight")});
    if (kind == "separable") {
        if (ws.size() != 3 || semi == std::string::npos) {
            throw ConfigError(line, "weight: usage 'separable c0 c1 ; theta:f ...'");
        }
        SeparableWeight sw;
        sw.radial = {to_double(ws[1], line, "weight"), to_double(ws[2], line, "weight")};
        sw.theta_table = to_pairs(words(v.substr(semi + 1)), 0, line, "weight");
        return WeightSpec(sw);
    }
    throw ConfigError(line, "weight: unknown kind '" + kind + "'");
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "N", "m", "p", "R", "r_max", "weight", "domain", "solver.tol", "solver.max_iter", "grid.M", "grid.J",
        "grid.S", "radial.M", "init.epsilon", "init.kind", "family.m", "sweep.R", "sweep.p", "sweep.solve2d",
        "seed", "out"};
    return keys;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream is(text);
    int lineno = 0;
    for (std::string raw; std::getline(is, raw);) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError(lineno, "unknown key '" + key + "'");
        if (kv.count(key)) throw ConfigError(lineno, "duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError(lineno, "missing value for '" + key + "'");
        kv[key] = {value, lineno};
        // the cone construction needs m >= 2; reject as soon as it is read
        if (key == "m") {
            const long m = to_int(value, lineno, key);
            if (m < 2) throw ConfigError(lineno, "m must be >= 2 (the cone needs a block of size at least 2)");
        }
    }
    for (const char* req : {"N", "m", "p"}) {
        if (!kv.count(req)) throw ConfigError(0, std::string("missing required key '") + req + "'");
    }
    auto line_of = [&](const std::string& k) { return kv.count(k) ? kv[k].second : 0; };
    auto get = [&](const std::string& k) { return kv.at(k).first; };

    RunConfig c;
    ProblemSpec& s = c.spec;
    s.N = static_cast<int>(to_int(get("N"), line_of("N"), "N"));
    if (s.N < 3) throw ConfigError(line_of("N"), "N must be >= 3");
    s.m = static_cast<int>(to_int(get("m"), line_of("m"), "m"));
    if (s.m > s.N - 1) throw ConfigError(line_of("m"), "m must be <= N - 1");
    s.p = to_double(get("p"), line_of("p"), "p");
    if (!(s.p > 2.0)) throw ConfigError(line_of("p"), "p must be > 2");

    if (kv.count("domain")) {
        const auto ws = words(get("domain"));
        const int ln = line_of("domain");
        if (ws.size() == 1 && ws[0] == "ball") {
            // default
        } else if (ws.size() == 3 && ws[0] == "affine") {
            const AffineG g{to_double(ws[1], ln, "domain"), to_double(ws[2], ln, "domain")};
            try {
                s.domain = DomainSpec(DoubleRevolution{g});
            } catch (const Error& e) {
                throw ConfigError(ln, e.what());
            }
        } else {
            throw ConfigError(ln, "domain: expected 'ball' or 'affine kappa c'");
        }
    }
    s.R = kv.count("R") ? to_double(get("R"), line_of("R"), "R") : (s.domain.is_ball() ? 1.0 : s.domain.inner_radius());
    if (!(s.R > 0.0)) throw ConfigError(line_of("R"), "R must be > 0");
    if (s.domain.is_ball()) s.domain = DomainSpec(ExteriorBall{s.R});
    s.r_max = kv.count("r_max") ? to_double(get("r_max"), line_of("r_max"), "r_max") : s.R + 25.0;
    if (!(s.r_max > s.R)) throw ConfigError(line_of("r_max"), "r_max must exceed R");
    if (kv.count("weight")) s.weight = parse_weight(get("weight"), line_of("weight"));

    auto positive_int = [&](const char* key, int& dst, int lo) {
        if (!kv.count(key)) return;
        const long v = to_int(get(key), line_of(key), key);
        if (v < lo) throw ConfigError(line_of(key), std::string(key) + " must be >= " + std::to_string(lo));
        dst = static_cast<int>(v);
    };
    if (kv.count("solver.tol")) {
        c.tol = to_double(get("solver.tol"), line_of("solver.tol"), "solver.tol");
        if (!(c.tol > 0.0)) throw ConfigError(line_of("solver.tol"), "solver.tol must be > 0");
    }
    positive_int("solver.max_iter", c.max_iter, 1);
    positive_int("grid.M", c.M, 4);
    positive_int("grid.J", c.J, 2);
    positive_int("grid.S", c.S, 8);
    positive_int("radial.M", c.radial_M, 4);
    if (kv.count("init.epsilon")) {
        c.epsilon = to_double(get("init.epsilon"), line_of("init.epsilon"), "init.epsilon");
        if (c.epsilon < 0.0) throw ConfigError(line_of("init.epsilon"), "init.epsilon must be >= 0");
    }
    if (kv.count("init.kind")) {
        c.init_kind = get("init.kind");
        if (c.init_kind != "perturbed" && c.init_kind != "random" && c.init_kind != "radial") {
            throw ConfigError(line_of("init.kind"), "init.kind must be perturbed, random or radial");
        }
    }
    if (kv.count("family.m")) {
        for (const auto& w : words(get("family.m"))) {
            const long m = to_int(w, line_of("family.m"), "family.m");
            if (m < 2 || m > s.N - 1) throw ConfigError(line_of("family.m"), "family.m entries must lie in [2, N-1]");
            c.family_m.push_back(static_cast<int>(m));
        }
    }
    if (kv.count("sweep.R")) c.sweep_R = to_list(get("sweep.R"), line_of("sweep.R"), "sweep.R");
    if (kv.count("sweep.p")) c.sweep_p = to_list(get("sweep.p"), line_of("sweep.p"), "sweep.p");
    for (double v : c.sweep_R) {
        if (!(v > 0.0)) throw ConfigError(line_of("sweep.R"), "sweep.R values must be > 0");
    }
    for (double v : c.sweep_p) {
        if (!(v > 2.0)) throw ConfigError(line_of("sweep.p"), "sweep.p values must be > 2");
    }
    if (kv.count("sweep.solve2d")) c.sweep_solve2d = to_bool(get("sweep.solve2d"), line_of("sweep.solve2d"), "sweep.solve2d");
    if (kv.count("seed")) {
        const long v = to_int(get("seed"), line_of("seed"), "seed");
        if (v < 0) throw ConfigError(line_of("seed"), "seed must be >= 0");
        c.seed = static_cast<std::uint64_t>(v);
    }
    if (kv.count("out")) c.out = get("out");

    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(0, e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw ConfigError(0, "--grid expects MxJ");
    const long M = to_int(text.substr(0, x), 0, "--grid"), J = to_int(text.substr(x + 1), 0, "--grid");
    if (M < 4 || J < 2) throw ConfigError(0, "--grid needs M >= 4 and J >= 2");
    return {static_cast<int>(M), static_cast<int>(J)};
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "N=" << spec.N << ";m=" << spec.m << ";p=" << fmt(spec.p) << ";R=" << fmt(spec.R)
       << ";r_max=" << fmt(spec.r_max) << ";weight=" << spec.weight.describe() << ";domain=" << spec.domain.describe()
       << ";tol=" << fmt(tol) << ";max_iter=" << max_iter << ";grid=" << M << "x" << J << ";S=" << S
       << ";radial.M=" << radial_M << ";epsilon=" << fmt(epsilon) << ";init=" << init_kind << ";family.m=";
    for (int m : family_m) os << m << ",";
    os << ";sweep.R=";
    for (double v : sweep_R) os << fmt(v) << ",";
    os << ";sweep.p=";
    for (double v : sweep_p) os << fmt(v) << ",";
    os << ";sweep.solve2d=" << sweep_solve2d << ";seed=" << seed;
    return os.str();
}

std::string RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace egs::cli
