#include "fermat/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fermat {

RunConfig RunConfig::defaults() { return RunConfig{}; }

TrackOptions RunConfig::track_options() const {
    TrackOptions o;
    o.initial_step = tracking_initial_step;
    o.max_step = tracking_max_step;
    o.min_step = tracking_min_step;
    o.eps_collide = collision_eps;
    o.max_plane_step = max_plane_step;
    const PencilConfig pc = pencil;
    const double cr = cluster_radius;
    o.precise_correct = [pc, cr](Cplx v, std::vector<Cplx>& z) {
        refine_branch_roots(pc, v, z, cr);
    };
    return o;
}

std::vector<PathSpec> RunConfig::mu_paths() const {
    if (mu_waypoints.empty()) return default_mu_paths(pencil);
    if (mu_waypoints.size() != 36)
        throw ConfigError("mu waypoint override must list all 36 paths");
    std::vector<PathSpec> out(36);
    for (int i = 0; i < 36; ++i) {
        if (mu_waypoints[i].size() < 2)
            throw ConfigError("mu path " + std::to_string(i + 1) + " needs at least 2 waypoints");
        out[i].waypoints = mu_waypoints[i];
        out[i].terminal_kind = TerminalKind::singular_endpoint;
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Rational parse_rational(const std::string& v, const std::string& key) {
    std::string s = v;
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            size_t pos = 0;
            std::int64_t num = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return Rational{num, 1};
        }
        size_t p1 = 0, p2 = 0;
        std::int64_t num = std::stoll(s.substr(0, slash), &p1);
        std::int64_t den = std::stoll(s.substr(slash + 1), &p2);
        if (p1 != slash || p2 != s.size() - slash - 1 || den == 0)
            throw std::invalid_argument(s);
        return Rational{num, den};
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a rational like \"7/8\", got " + v);
    }
}

double parse_number(const std::string& v, const std::string& key) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == nullptr || *end != '\0')
        throw ConfigError("key '" + key + "': expected a number, got " + v);
    return d;
}

std::string parse_string(const std::string& v, const std::string& key) {
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        throw ConfigError("key '" + key + "': expected a quoted string, got " + v);
    return v.substr(1, v.size() - 2);
}

// [[re, im], [re, im], ...] on a single line
std::vector<Cplx> parse_waypoints(const std::string& v, const std::string& key) {
    std::vector<Cplx> out;
    size_t p = 0;
    auto fail = [&]() -> ConfigError {
        return ConfigError("key '" + key + "': expected [[re, im], ...], got " + v);
    };
    auto skip = [&]() { while (p < v.size() && std::isspace((unsigned char)v[p])) ++p; };
    auto expect = [&](char c) { skip(); if (p >= v.size() || v[p] != c) throw fail(); ++p; };
    auto number = [&]() {
        skip();
        char* end = nullptr;
        double d = std::strtod(v.c_str() + p, &end);
        if (end == v.c_str() + p) throw fail();
        p = size_t(end - v.c_str());
        return d;
    };
    expect('[');
    skip();
    while (p < v.size() && v[p] != ']') {
        expect('[');
        double re = number();
        expect(',');
        double im = number();
        expect(']');
        out.emplace_back(re, im);
        skip();
        if (p < v.size() && v[p] == ',') { ++p; skip(); }
    }
    expect(']');
    skip();
    if (p != v.size()) throw fail();
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg = RunConfig::defaults();
    std::vector<std::vector<Cplx>> mu(36);
    bool any_mu = false;

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "pencil" && section != "tolerances" && section != "basis" &&
                section != "output" && section != "paths")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "schema") {
            if (parse_number(val, full) != 1) throw ConfigError("unsupported schema version " + val);
        } else if (full == "pencil.c1") {
            cfg.pencil.c1 = parse_rational(val, full);
        } else if (full == "pencil.c2") {
            cfg.pencil.c2 = parse_rational(val, full);
        } else if (full == "tolerances.tracking_initial_step") {
            cfg.tracking_initial_step = parse_number(val, full);
        } else if (full == "tolerances.tracking_max_step") {
            cfg.tracking_max_step = parse_number(val, full);
        } else if (full == "tolerances.tracking_min_step") {
            cfg.tracking_min_step = parse_number(val, full);
        } else if (full == "tolerances.collision_eps") {
            cfg.collision_eps = parse_number(val, full);
        } else if (full == "tolerances.max_plane_step") {
            cfg.max_plane_step = parse_number(val, full);
        } else if (full == "tolerances.cluster_radius") {
            cfg.cluster_radius = parse_number(val, full);
        } else if (full == "basis.lasso_radius_factor") {
            cfg.lasso_radius_factor = parse_number(val, full);
        } else if (full == "basis.basepoint_re") {
            cfg.basis_basepoint = Cplx(parse_number(val, full), cfg.basis_basepoint.imag());
        } else if (full == "basis.basepoint_im") {
            cfg.basis_basepoint = Cplx(cfg.basis_basepoint.real(), parse_number(val, full));
        } else if (full == "output.directory") {
            cfg.out_dir = parse_string(val, full);
        } else if (section == "paths" && key.rfind("mu", 0) == 0) {
            int idx = 0;
            try {
                idx = std::stoi(key.substr(2));
            } catch (const std::exception&) {
                throw ConfigError("unknown key '" + full + "'");
            }
            if (idx < 1 || idx > 36) throw ConfigError("path index out of range in '" + full + "'");
            mu[idx - 1] = parse_waypoints(val, full);
            any_mu = true;
        } else {
            throw ConfigError("unknown key '" + full + "'");
        }
    }

    if (any_mu) {
        for (int i = 0; i < 36; ++i)
            if (mu[i].empty())
                throw ConfigError("paths override is incomplete: mu" + std::to_string(i + 1) +
                                  " missing");
        cfg.mu_waypoints = std::move(mu);
    }
    if (cfg.pencil.c1.den == 0 || cfg.pencil.c2.den == 0)
        throw ConfigError("zero denominator in pencil constants");
    if (!(cfg.tracking_min_step > 0) || !(cfg.tracking_max_step > cfg.tracking_min_step))
        throw ConfigError("tracking step bounds are inconsistent");
    if (!(cfg.collision_eps > 0) || !(cfg.lasso_radius_factor > 0) ||
        !(cfg.lasso_radius_factor < 1))
        throw ConfigError("tolerances out of range");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace fermat
