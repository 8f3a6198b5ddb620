#include "fermat/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fermat {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string json_complex(Cplx z) {
    return "{\"im\":" + fmt_double(z.imag()) + ",\"re\":" + fmt_double(z.real()) + "}";
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

template <class T, class F>
std::string json_array(const std::vector<T>& v, F f) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += f(v[i]);
    }
    return out + "]";
}

std::string setup_json(const SetupReport& s) {
    std::ostringstream o;
    o << "{\"assumption_value\":" << fmt_double(s.assumption_value)
      << ",\"katz_degree\":" << s.katz_degree
      << ",\"lemma41_ok\":" << (s.lemma41_ok ? "true" : "false")
      << ",\"q_at_base\":" << json_complex(s.q_at_base)
      << ",\"transversal\":" << (s.transversal ? "true" : "false") << "}";
    return o.str();
}

std::string tables_body(const TablesData& t) {
    std::ostringstream o;
    o << "\"a_roots\":" << json_array(t.a_roots, json_complex);
    o << ",\"chi_table\":"
      << json_array(t.chi, [](const CoverPerm& p) { return json_string(p.cycle_string()); });
    o << ",\"collision_table\":" << json_array(t.collisions, [](const CollisionRow& r) {
        std::ostringstream c;
        c << "{\"delta\":" << r.delta << ",\"distinct_g_roots\":" << r.distinct_g_roots
          << ",\"epsilon\":" << r.epsilon << ",\"i\":" << r.i
          << ",\"max_fiber_points\":" << r.max_fiber_points
          << ",\"min_fiber_points\":" << r.min_fiber_points << "}";
        return c.str();
    });
    o << ",\"dual_points\":" << json_array(t.dual_points, [](const DualPoint& d) {
        std::ostringstream c;
        c << "{\"i1\":" << d.i1 << ",\"i2\":" << d.i2 << ",\"label\":" << d.label
          << ",\"v\":" << json_complex(d.v) << "}";
        return c.str();
    });
    o << ",\"infinity_permutation\":" << json_string(t.infinity.cycle_string());
    o << ",\"setup\":" << setup_json(t.setup);
    return o.str();
}

}  // namespace

TablesData run_tables(const RunConfig& cfg, int threads) {
    TablesData t;
    try {
        t.setup = verify_setup(cfg.pencil);
        t.dual_points = line_dual_points(cfg.pencil);
        t.a_roots = branch_points_a(cfg.pencil);
        t.chi = chi_table(cfg.pencil, cfg.lasso_radius_factor);
        t.infinity = infinity_permutation(cfg.pencil, 0.0);
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError("setup", 0, e.what());
    }
    std::vector<PathSpec> mu = cfg.mu_paths();
    t.collisions.resize(36);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
    for (int i = 1; i <= 36; ++i) {
        try {
            t.collisions[i - 1] = collision_row(cfg.pencil, i, mu[i - 1], t.a_roots,
                                                cfg.track_options());
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) {
        try {
            std::rethrow_exception(err);
        } catch (const std::exception& e) {
            throw StageError("tracking", 0, e.what());
        }
    }
    return t;
}

CyclesData run_cycles(const RunConfig& cfg, int threads) {
    CyclesData c;
    double t0 = now_seconds();
    try {
        c.tables.setup = verify_setup(cfg.pencil);
        c.tables.dual_points = line_dual_points(cfg.pencil);
        c.tables.a_roots = branch_points_a(cfg.pencil);
        c.tables.chi = chi_table(cfg.pencil, cfg.lasso_radius_factor);
        c.tables.infinity = infinity_permutation(cfg.pencil, 0.0);
    } catch (const std::exception& e) {
        throw StageError("setup", 0, e.what());
    }
    c.timings["setup"] = now_seconds() - t0;

    t0 = now_seconds();
    GeneratorTuple base;
    try {
        base = ordered_basis(cfg.pencil, 0.0, c.tables.a_roots, cfg.basis_basepoint);
        c.surface = build_ribbon_surface(c.tables.a_roots, cfg.basis_basepoint, base.letter_perms,
                                         c.tables.infinity);
    } catch (const std::exception& e) {
        throw StageError("surface", 0, e.what());
    }
    c.timings["surface"] = now_seconds() - t0;

    t0 = now_seconds();
    std::vector<PathSpec> mu = cfg.mu_paths();
    c.tracks.resize(36);
    c.tables.collisions.resize(36);
    c.lassos.resize(36);
    c.classes.resize(36);
    std::exception_ptr err;
    int err_index = 0;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
    for (int i = 1; i <= 36; ++i) {
        try {
            TrackOptions opts = cfg.track_options();
            opts.record_positions = true;
            auto family = [&](Cplx v) { return G_poly(cfg.pencil, v); };
            RootTrack tr = track_roots(family, c.tables.a_roots, mu[i - 1], opts);
            c.tables.collisions[i - 1] =
                collision_row_from_track(cfg.pencil, i, tr, mu[i - 1].waypoints.back());
            c.lassos[i - 1] = vanishing_lasso(base, tr);
            c.classes[i - 1] = vanishing_cycle_class(c.surface, c.lassos[i - 1]);
            c.tracks[i - 1] = std::move(tr);
        } catch (...) {
#pragma omp critical
            if (!err) {
                err = std::current_exception();
                err_index = i;
            }
        }
    }
    if (err) {
        try {
            std::rethrow_exception(err);
        } catch (const std::exception& e) {
            throw StageError("tracking", err_index, e.what());
        }
    }
    c.timings["tracking"] = now_seconds() - t0;

    t0 = now_seconds();
    c.relation = verify_relation(c.classes, c.surface.form);
    c.mod2_order = generation_mod2(c.classes, c.surface.form);
    c.timings["symplectic"] = now_seconds() - t0;
    return c;
}

std::string tables_json(const TablesData& t) {
    return "{" + tables_body(t) + ",\"schema\":1}\n";
}

std::string report_json(const CyclesData& c) {
    std::ostringstream o;
    o << "{" << tables_body(c.tables);
    o << ",\"classes\":" << json_array(c.classes, [](const HomologyCycle& h) {
        std::ostringstream a;
        a << "[";
        for (int k = 0; k < 6; ++k) a << (k ? "," : "") << h.coords[k];
        a << "]";
        return a.str();
    });
    o << ",\"mod2_order\":" << c.mod2_order;
    o << ",\"relation\":{\"product_is_identity\":"
      << (c.relation.product_is_identity ? "true" : "false")
      << ",\"sign_convention_used\":" << c.relation.sign_convention_used << "}";
    o << ",\"schema\":1";
    o << ",\"timings\":\"timings.json\"";
    o << "}\n";
    return o.str();
}

std::string timings_json(const CyclesData& c) {
    std::ostringstream o;
    o << "{";
    bool first = true;
    for (const auto& [k, v] : c.timings) {
        if (!first) o << ",";
        first = false;
        o << json_string(k) << ":" << fmt_double(v);
    }
    o << "}\n";
    return o.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

}  // namespace fermat
