// Acceptance gate: runs the full pipeline once and checks the ten criteria,
// printing one pass/fail line per criterion. Exit status 0 only if all pass.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "fermat/pipeline.hpp"
#include "fermat/svgplot.hpp"

using namespace fermat;

namespace {
int g_failures = 0;

void report(int n, bool ok, const std::string& what) {
    std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

const Cplx kI(0.0, 1.0);

bool near(Cplx a, Cplx b, double tol) { return std::abs(a - b) < tol; }

// Published collision pairs (delta, epsilon) for i = 1..36.
const int kPairs[36][2] = {
    {3, 6},  {1, 4},  {2, 5},  {1, 7},  {2, 8},  {3, 9},  {2, 11}, {3, 12}, {1, 10},
    {6, 9},  {4, 7},  {5, 8},  {4, 10}, {5, 11}, {6, 12}, {2, 5},  {3, 6},  {1, 4},
    {9, 12}, {7, 10}, {8, 11}, {1, 7},  {2, 8},  {3, 9},  {5, 8},  {6, 9},  {4, 7},
    {3, 12}, {1, 10}, {2, 11}, {4, 10}, {5, 11}, {6, 12}, {8, 11}, {9, 12}, {7, 10}};
}  // namespace

int main() {
    RunConfig cfg = RunConfig::defaults();
    int threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    CyclesData data;
    try {
        data = run_cycles(cfg, threads);
    } catch (const StageError& e) {
        std::printf("pipeline failed at stage %s (path %d): %s\n", e.stage.c_str(), e.index,
                    e.what());
        return 1;
    }
    const TablesData& t = data.tables;

    // 1. Dual points: count, published anchors, quarter-turn closure.
    {
        bool ok = t.dual_points.size() == 36;
        const Cplx want[5] = {{0.600851, 0.315483},
                              {0.963952, 0.064039},
                              {0.999689, 0.470655},
                              {1.059535, 0.794167},
                              {1.145495, 1.145495}};
        for (int i = 0; i < 5 && ok; ++i) ok = near(t.dual_points[std::size_t(i)].v, want[i], 1e-5);
        for (const auto& p : t.dual_points) {
            bool hit = std::any_of(t.dual_points.begin(), t.dual_points.end(),
                                   [&](const DualPoint& q) { return near(q.v, kI * p.v, 1e-10); });
            ok = ok && hit;
        }
        report(1, ok, "36 dual points, printed v1..v5 to 1e-5, i-rotation closed to 1e-10");
    }

    // 2. Branch roots: published a1..a3 and the rotation labelling.
    {
        bool ok = t.a_roots.size() == 12;
        const Cplx want[3] = {{0.709187, 0.642143}, {0.692307, 0.692307}, {0.642143, 0.709187}};
        for (int j = 0; j < 3 && ok; ++j) ok = near(t.a_roots[std::size_t(j)], want[j], 1e-5);
        for (int j = 0; j < 9 && ok; ++j)
            ok = near(t.a_roots[std::size_t(j + 3)], kI * t.a_roots[std::size_t(j)], 1e-9);
        report(2, ok, "a1..a3 to 1e-5 and a_{j+3} = i a_j to 1e-9");
    }

    // 3. chi table: exact published transpositions.
    {
        const char* want[12] = {"(1 2)", "(1 3)", "(1 4)", "(2 3)", "(2 4)", "(1 2)",
                                "(3 4)", "(1 3)", "(2 3)", "(1 4)", "(2 4)", "(3 4)"};
        bool ok = t.chi.size() == 12;
        for (int j = 0; j < 12 && ok; ++j) ok = t.chi[std::size_t(j)].cycle_string() == want[j];
        report(3, ok, "chi(l_1..l_12) equals the published table exactly");
    }

    // 4. Collision table: all 36 published pairs; 11 distinct roots; 3-point fibers.
    {
        bool ok = t.collisions.size() == 36;
        for (int i = 0; i < 36 && ok; ++i) {
            const CollisionRow& r = t.collisions[std::size_t(i)];
            ok = r.delta == kPairs[i][0] && r.epsilon == kPairs[i][1] && r.distinct_g_roots == 11 &&
                 r.min_fiber_points == 3 && r.max_fiber_points == 3;
        }
        report(4, ok, "all 36 (delta, epsilon) pairs, 11 distinct roots, 3-point fibers");
    }

    // 5. Setup: transversality, degree bound, Katz degrees, Q at the dual points,
    //    trivial monodromy at infinity.
    {
        bool ok = t.setup.transversal && t.setup.lemma41_ok && t.setup.assumption_value < 1.0 &&
                  t.setup.katz_degree == 36 && katz_dual_degree(2) == 2 && katz_dual_degree(3) == 12;
        // Q is the discriminant of the branch polynomial; its natural scale
        // grows by ~45 orders of magnitude over the dual-point radii, so the
        // vanishing test compares each |Q(v_i)| against the local off-point
        // scale (the literal |Q(0)|-relative form only makes sense at the
        // innermost point v_1, where it is also checked).
        double q0 = std::abs(Q_value(cfg.pencil, Cplx(0, 0)));
        ok = ok && std::abs(Q_value(cfg.pencil, t.dual_points[0].v)) < 1e-8 * q0;
        for (const auto& p : t.dual_points) {
            Cplx dir = p.v / std::abs(p.v);
            double off = std::abs(Q_value(cfg.pencil, p.v + 0.01 * dir));
            ok = ok && std::abs(Q_value(cfg.pencil, p.v)) < 1e-8 * off;
        }
        ok = ok && t.infinity == CoverPerm::identity();
        report(5, ok, "transversality, degree checks, Q(v_i) ~ 0, identity at infinity");
    }

    // 6. Topology of the branched cover.
    {
        const RibbonSurface& s = data.surface;
        bool ok = s.euler == -4 && s.genus == 3 && s.h1_rank == 6 && s.form.antisymmetric() &&
                  s.form.det() == 1;
        report(6, ok, "genus-3 surface, rank-6 antisymmetric unimodular form");
    }

    // 7. Vanishing cycles: nonzero, primitive, isotropic. Equality of the two
    //    sheet-lifts is asserted during construction, so reaching here with 36
    //    classes certifies it.
    {
        bool ok = data.classes.size() == 36;
        for (const auto& c : data.classes)
            ok = ok && !c.is_zero() && c.primitive() && data.surface.form.pair(c, c) == 0;
        report(7, ok, "36 nonzero primitive classes with vanishing self-pairing");
    }

    // 8. The relation T36 ... T1 = 1 over the integers, and cyclic rotations.
    {
        bool ok = data.relation.product_is_identity &&
                  (data.relation.sign_convention_used == 1 ||
                   data.relation.sign_convention_used == -1);
        for (int shift : {1, 7}) {
            std::vector<HomologyCycle> rot;
            for (int k = 0; k < 36; ++k)
                rot.push_back(data.classes[std::size_t((k + shift) % 36)]);
            try {
                RelationReport r = verify_relation(rot, data.surface.form);
                ok = ok && r.product_is_identity &&
                     r.sign_convention_used == data.relation.sign_convention_used;
            } catch (const NeverCloses&) {
                ok = false;
            }
        }
        report(8, ok, "transvection product closes (recorded sign), also under cyclic rotation");
    }

    // 9. Mod-2 group order.
    report(9, data.mod2_order == 1451520, "mod-2 transvection group has order 1451520");

    // 10. Robustness: halved steps reproduce path 1's events and pair; halved
    //     lasso radius reproduces the chi table; serialization is bit-stable.
    {
        bool ok = true;
        auto a = branch_points_a(cfg.pencil);
        auto mu = cfg.mu_paths();
        TrackOptions fine = cfg.track_options();
        fine.initial_step *= 0.5;
        fine.max_step *= 0.5;
        RootTrack tr = track_roots([&](Cplx v) { return G_poly(cfg.pencil, v); }, a, mu[0], fine);
        const RootTrack& ref = data.tracks[0];
        ok = ok && tr.collided && tr.delta == ref.delta && tr.epsilon == ref.epsilon &&
             tr.events.size() == ref.events.size();
        for (size_t k = 0; ok && k < tr.events.size(); ++k)
            ok = tr.events[k].position == ref.events[k].position &&
                 tr.events[k].sign == ref.events[k].sign;

        auto chi_half = chi_table(cfg.pencil, 0.5 * cfg.lasso_radius_factor);
        for (int j = 0; j < 12 && ok; ++j) ok = chi_half[std::size_t(j)] == t.chi[std::size_t(j)];

        ok = ok && report_json(data) == report_json(data) && tables_json(t) == tables_json(t);
        report(10, ok, "halved steps, halved lasso radius, and re-serialization are stable");
    }

    std::printf("%s (%d/10)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILED",
                10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
