#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "fermat/pipeline.hpp"
#include "fermat/svgplot.hpp"

using namespace fermat;

namespace {

constexpr int kExitSetup = 2;
constexpr int kExitTracking = 3;
constexpr int kExitRelation = 4;

RunConfig load(const std::string& config_path, const std::string& out_dir) {
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cfg;
}

int cmd_verify_setup(const RunConfig& cfg) {
    SetupReport s;
    try {
        s = verify_setup(cfg.pencil);
    } catch (const std::exception& e) {
        std::printf("setup check failed: %s\n", e.what());
        return kExitSetup;
    }
    std::printf("transversality: %s\n", s.transversal ? "ok" : "FAIL");
    std::printf("tameness assumption (|c1|^4 + |c2|^4 = %.6f < 1): %s\n", s.assumption_value,
                s.lemma41_ok ? "ok" : "FAIL");
    std::printf("dual degree (Katz): %d\n", s.katz_degree);
    std::printf("Q(0) = %.6g + %.6gi (nonzero: %s)\n", s.q_at_base.real(), s.q_at_base.imag(),
                std::abs(s.q_at_base) > 0 ? "ok" : "FAIL");
    bool ok = s.transversal && s.lemma41_ok && s.katz_degree == 36 && std::abs(s.q_at_base) > 0;
    if (!ok) {
        if (!s.transversal) std::printf("failed check: transversality\n");
        if (!s.lemma41_ok) std::printf("failed check: tameness assumption\n");
        if (s.katz_degree != 36) std::printf("failed check: dual degree\n");
        if (!(std::abs(s.q_at_base) > 0)) std::printf("failed check: Q(0) != 0\n");
        return kExitSetup;
    }
    std::printf("all setup checks passed\n");
    return 0;
}

int cmd_tables(const RunConfig& cfg, int threads) {
    TablesData t;
    try {
        t = run_tables(cfg, threads);
    } catch (const StageError& e) {
        std::fprintf(stderr, "%s stage failed%s: %s\n", e.stage.c_str(),
                     e.index ? (" (path " + std::to_string(e.index) + ")").c_str() : "", e.what());
        return e.stage == "setup" ? kExitSetup : kExitTracking;
    }
    for (const DualPoint& d : t.dual_points)
        std::printf("v_%-2d = %+.12f %+.12fi   (i1=%d, i2=%d)\n", d.label, d.v.real(), d.v.imag(),
                    d.i1, d.i2);
    for (size_t j = 0; j < t.a_roots.size(); ++j)
        std::printf("a_%-2zu = %+.12f %+.12fi   chi = %s\n", j + 1, t.a_roots[j].real(),
                    t.a_roots[j].imag(), t.chi[j].cycle_string().c_str());
    std::printf("chi at infinity: %s\n", t.infinity.cycle_string().c_str());
    for (const CollisionRow& r : t.collisions)
        std::printf("i=%-2d  (delta, epsilon) = (%d, %d)   distinct G-roots: %d   fiber points: "
                    "%d..%d\n",
                    r.i, r.delta, r.epsilon, r.distinct_g_roots, r.min_fiber_points,
                    r.max_fiber_points);
    write_text_file(cfg.out_dir + "/tables.json", tables_json(t));
    std::printf("wrote %s/tables.json\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_cycles(const RunConfig& cfg, int threads) {
    CyclesData c;
    try {
        c = run_cycles(cfg, threads);
    } catch (const StageError& e) {
        std::fprintf(stderr, "%s stage failed%s: %s\n", e.stage.c_str(),
                     e.index ? (" (path " + std::to_string(e.index) + ")").c_str() : "", e.what());
        return e.stage == "setup" ? kExitSetup : kExitTracking;
    }
    for (int i = 0; i < 36; ++i) {
        const HomologyCycle& h = c.classes[i];
        std::printf("c_%-2d = [%lld, %lld, %lld, %lld, %lld, %lld]\n", i + 1,
                    (long long)h.coords[0], (long long)h.coords[1], (long long)h.coords[2],
                    (long long)h.coords[3], (long long)h.coords[4], (long long)h.coords[5]);
    }
    std::printf("relation T36...T1 = 1: %s (transvection sign %+d)\n",
                c.relation.product_is_identity ? "yes" : "NO", c.relation.sign_convention_used);
    std::printf("mod-2 group order: %lld\n", (long long)c.mod2_order);
    write_text_file(cfg.out_dir + "/report.json", report_json(c));
    write_text_file(cfg.out_dir + "/timings.json", timings_json(c));
    std::printf("wrote %s/report.json\n", cfg.out_dir.c_str());
    if (!c.relation.product_is_identity) return kExitRelation;
    return 0;
}

int cmd_plot(const RunConfig& cfg, const std::string& what, int threads) {
    std::vector<Cplx> a;
    try {
        a = branch_points_a(cfg.pencil);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "setup stage failed: %s\n", e.what());
        return kExitSetup;
    }
    if (what == "roots") {
        write_text_file(cfg.out_dir + "/roots.svg", svg_roots(a));
        std::printf("wrote %s/roots.svg\n", cfg.out_dir.c_str());
        return 0;
    }
    std::vector<PathSpec> mu = cfg.mu_paths();
    TrackOptions opts = cfg.track_options();
    opts.record_positions = true;
    auto family = [&](Cplx v) { return G_poly(cfg.pencil, v); };
    if (what.rfind("tracks:", 0) == 0) {
        int i = 0;
        try {
            i = std::stoi(what.substr(7));
        } catch (const std::exception&) {
            std::fprintf(stderr, "bad --what value: %s\n", what.c_str());
            return kExitSetup;
        }
        if (i < 1 || i > 36) {
            std::fprintf(stderr, "track index out of range: %d\n", i);
            return kExitSetup;
        }
        RootTrack tr;
        try {
            tr = track_roots(family, a, mu[i - 1], opts);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "tracking stage failed (path %d): %s\n", i, e.what());
            return kExitTracking;
        }
        std::string name = cfg.out_dir + "/tracks_" + std::to_string(i) + ".svg";
        write_text_file(name, svg_tracks(tr, a, i));
        std::printf("wrote %s\n", name.c_str());
        return 0;
    }
    if (what == "arcs") {
        std::vector<RootTrack> tracks(9);
        std::exception_ptr err;
        int err_index = 0;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
        for (int i = 1; i <= 9; ++i) {
            try {
                tracks[i - 1] = track_roots(family, a, mu[i - 1], opts);
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
                std::fprintf(stderr, "tracking stage failed (path %d): %s\n", err_index, e.what());
                return kExitTracking;
            }
        }
        write_text_file(cfg.out_dir + "/arcs.svg", svg_arcs(tracks, a));
        std::printf("wrote %s/arcs.svg\n", cfg.out_dir.c_str());
        return 0;
    }
    std::fprintf(stderr, "unknown --what value: %s (expected roots, tracks:i, or arcs)\n",
                 what.c_str());
    return kExitSetup;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monodromy of the quartic Fermat pencil"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, what;
    int threads = 1;
    app.add_option("--config", config_path, "configuration file (TOML subset)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker threads for the 36 paths");

    CLI::App* sub_setup = app.add_subcommand("verify-setup", "run the pencil genericity checks");
    CLI::App* sub_tables = app.add_subcommand("tables", "dual points, branch roots, chi, collisions");
    CLI::App* sub_cycles = app.add_subcommand("cycles", "full pipeline through the relation check");
    CLI::App* sub_plot = app.add_subcommand("plot", "emit SVG figures");
    sub_plot->add_option("--what", what, "roots | tracks:i | arcs")->required();

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        cfg = load(config_path, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitSetup;
    }

    if (sub_setup->parsed()) return cmd_verify_setup(cfg);
    if (sub_tables->parsed()) return cmd_tables(cfg, threads);
    if (sub_cycles->parsed()) return cmd_cycles(cfg, threads);
    if (sub_plot->parsed()) return cmd_plot(cfg, what, threads);
    return 0;
}
