#include "fermat/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fermat {

namespace {

constexpr double kPi = 3.14159265358979323846;

double min_pair_distance(const std::vector<Cplx>& z, int* pa = nullptr, int* pb = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            double d = std::abs(z[i] - z[j]);
            if (d < best) {
                best = d;
                if (pa) *pa = int(i);
                if (pb) *pb = int(j);
            }
        }
    return best;
}

std::vector<int> sorted_order(const std::vector<Cplx>& z) {
    std::vector<int> idx(z.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return strand_less(z[a], z[b]); });
    return idx;
}

double point_segment_distance(Cplx p, Cplx a, Cplx b) {
    Cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

int cluster_count(const std::vector<Cplx>& pts, double radius) {
    std::vector<int> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) <= radius) parent[find(int(i))] = find(int(j));
    int n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (find(int(i)) == int(i)) ++n;
    return n;
}

}  // namespace

double PathSpec::length() const {
    double s = 0;
    for (std::size_t k = 1; k < waypoints.size(); ++k) s += std::abs(waypoints[k] - waypoints[k - 1]);
    return s;
}

Cplx PathSpec::at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    if (waypoints.size() < 2) return waypoints.at(0);
    double target = t * length();
    double s = 0;
    for (std::size_t k = 1; k < waypoints.size(); ++k) {
        double seg = std::abs(waypoints[k] - waypoints[k - 1]);
        if (target <= s + seg || k + 1 == waypoints.size()) {
            double u = seg > 0 ? (target - s) / seg : 0.0;
            return waypoints[k - 1] + u * (waypoints[k] - waypoints[k - 1]);
        }
        s += seg;
    }
    return waypoints.back();
}

PathSpec lasso_path(Cplx basepoint, Cplx center, double radius, int circle_segments) {
    Cplx u = (basepoint - center) / std::abs(basepoint - center);
    PathSpec p;
    p.waypoints.push_back(basepoint);
    for (int k = 0; k <= circle_segments; ++k) {
        double th = 2.0 * kPi * double(k % circle_segments) / double(circle_segments);
        p.waypoints.push_back(center + radius * u * Cplx(std::cos(th), std::sin(th)));
    }
    p.waypoints.push_back(basepoint);
    return p;
}

RootTrack track_roots(const std::function<UniPoly(Cplx)>& family, const std::vector<Cplx>& start,
                      const PathSpec& path, const TrackOptions& opts) {
    const int n = int(start.size());
    RootTrack tr;
    tr.start = start;
    if (opts.precise_correct) {
        opts.precise_correct(path.at(0.0), tr.start);
    } else {
        UniPoly p0 = family(path.at(0.0));
        for (int j = 0; j < n; ++j) tr.start[j] = newton_refine(p0, start[j], 1e-13, 1e-12);
    }
    std::vector<Cplx> cur = tr.start;
    double dt_cap = opts.max_step;
    if (std::isfinite(opts.max_plane_step)) {
        double len = path.length();
        if (len > 0.0) dt_cap = std::min(dt_cap, opts.max_plane_step / len);
    }
    double t = 0.0, dt = std::min(opts.initial_step, dt_cap);
    tr.times.push_back(0.0);
    if (opts.record_positions) tr.positions.push_back(cur);

    auto refine_all = [&](double t2, std::vector<Cplx>& out) {
        out = cur;
        try {
            if (opts.precise_correct) {
                opts.precise_correct(path.at(t2), out);
            } else {
                UniPoly p = family(path.at(t2));
                for (int j = 0; j < n; ++j) out[j] = newton_refine(p, cur[j], 1e-13, 1e-12);
            }
        } catch (const std::runtime_error&) {
            return false;
        }
        return true;
    };

    // The colliding pair moves like sqrt(t*-t), so the plain contract is not
    // satisfiable all the way down to eps_collide. A collision step is
    // accepted under pair-aware rules: the two nearest strands may move
    // freely inside their own small neighborhood while every other strand
    // still obeys the contract.
    auto try_collision_accept = [&](const std::vector<Cplx>& next) {
        int ia = 0, ib = 0;
        double d = min_pair_distance(next, &ia, &ib);
        if (d >= opts.eps_collide) return false;
        double third = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            if (k == ia || k == ib) continue;
            third = std::min(third, std::min(std::abs(next[k] - next[ia]), std::abs(next[k] - next[ib])));
        }
        if (third <= 50.0 * d) return false;
        // the same two labels must already be the closest pair before the step
        int ja = 0, jb = 0;
        min_pair_distance(cur, &ja, &jb);
        if (std::min(ja, jb) != std::min(ia, ib) || std::max(ja, jb) != std::max(ia, ib)) return false;
        // pair strands may only have moved within the pair's own neighborhood
        if (std::abs(next[ia] - cur[ia]) > third / 3.0 || std::abs(next[ib] - cur[ib]) > third / 3.0)
            return false;
        // everything else keeps the ordinary contract
        double mind_rest = third;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                if ((j == ia && k == ib) || (j == ib && k == ia)) continue;
                mind_rest = std::min(mind_rest, std::abs(next[j] - next[k]));
            }
        for (int j = 0; j < n; ++j) {
            if (j == ia || j == ib) continue;
            if (std::abs(next[j] - cur[j]) >= mind_rest / 3.0) return false;
        }
        tr.collided = true;
        tr.collide_t = t;  // last t with the pair still separated
        tr.delta = std::min(ia, ib) + 1;
        tr.epsilon = std::max(ia, ib) + 1;
        return true;
    };

    const bool singular = path.terminal_kind == TerminalKind::singular_endpoint;
    while (t < 1.0 && !tr.collided) {
        bool multi_swap_reject = false;
        std::string reject_info;
        double t2 = std::min(1.0, t + dt);
        std::vector<Cplx> next;
        bool ok = refine_all(t2, next);
        if (ok && singular && try_collision_accept(next)) break;
        if (ok) {
            double mind = std::min(min_pair_distance(cur), min_pair_distance(next));
            double maxdisp = 0;
            for (int j = 0; j < n; ++j) maxdisp = std::max(maxdisp, std::abs(next[j] - cur[j]));
            if (!(maxdisp < mind / 3.0)) ok = false;
        }
        int cross_u = -1, cross_w = -1;  // labels of a genuine crossing, u left before
        int cross_pos = 0;
        if (ok) {
            // nearest-neighbor matching must be the identity assignment
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (k != j && std::abs(next[j] - cur[k]) <= std::abs(next[j] - cur[j]))
                        throw AmbiguousMatch("corrector landed closer to a foreign strand");
            std::vector<int> o1 = sorted_order(cur), o2 = sorted_order(next);
            std::vector<int> r1(n), r2(n);
            for (int s = 0; s < n; ++s) r1[o1[s]] = s, r2[o2[s]] = s;
            int genuine = 0;
            for (int u = 0; u < n && ok; ++u)
                for (int w = u + 1; w < n && ok; ++w) {
                    if ((r1[u] - r1[w]) * (r2[u] - r2[w]) >= 0) continue;  // order kept
                    int a = r1[u] < r1[w] ? u : w, b = a == u ? w : u;
                    double d0 = strand_key(cur[a]) - strand_key(cur[b]);
                    double d1 = strand_key(next[a]) - strand_key(next[b]);
                    // A lex-order swap forces a strict real-part sign change
                    // (equal real parts with an Im-order swap would mean a
                    // collision); a sample landing exactly on the crossing is
                    // re-stepped. The corrected roots carry long-double
                    // accuracy, so even ~1e-10 differences are trustworthy.
                    if (!(d0 < 0.0 && d1 > 0.0)) {
                        ok = false;
                        multi_swap_reject = true;
                        reject_info = "swap without re sign change: t=" + std::to_string(t) +
                                      " labels " + std::to_string(a) + "," + std::to_string(b) +
                                      " d0=" + std::to_string(d0) + " d1=" + std::to_string(d1) +
                                      " ranks " + std::to_string(r1[a]) + "->" + std::to_string(r2[a]);
                        continue;
                    }
                    if (++genuine > 1 || std::abs(r1[u] - r1[w]) != 1 ||
                        std::abs(r2[u] - r2[w]) != 1) {
                        ok = false;
                        multi_swap_reject = true;
                        reject_info = "multi/nonadjacent swap: t=" + std::to_string(t) +
                                      " genuine=" + std::to_string(genuine);
                    } else {
                        cross_u = a;
                        cross_w = b;
                        cross_pos = std::min(r1[u], r1[w]) + 1;
                    }
                }
        }
        if (!ok) {
            dt *= 0.5;
            if (dt < opts.min_step) {
                if (singular) {  // terminal jump: the pair collapses at t = 1
                    std::vector<Cplx> fin;
                    if (refine_all(1.0, fin) && try_collision_accept(fin)) break;
                }
                if (multi_swap_reject)
                    throw SimultaneousCrossing("order change is not a single adjacent swap: " + reject_info);
                throw StepUnderflow("step fell below the minimum without meeting the contract");
            }
            continue;
        }
        if (cross_u >= 0) {  // cross_u moves rightward past cross_w
            CrossEvent ev;
            ev.t = 0.5 * (t + t2);
            ev.position = cross_pos;
            // Over/under is the Im comparison at the instant the real parts
            // coincide. Close strands can cross in Im within the same step,
            // so bisect to the Re-crossing before comparing.
            Cplx al = cur[cross_u], bl = cur[cross_w];
            Cplx ah = next[cross_u], bh = next[cross_w];
            double tl = t, th = t2;
            for (int it = 0; it < 60; ++it) {
                double dl = (al - bl).imag(), dh = (ah - bh).imag();
                if ((dl > 0) == (dh > 0) && dl != 0 && dh != 0) break;
                if (th - tl < 1e-13) break;
                double tm = 0.5 * (tl + th);
                std::vector<Cplx> mid;
                if (!refine_all(tm, mid)) break;
                int ja = 0, jb = 0;
                for (int k = 0; k < n; ++k) {
                    if (std::abs(mid[k] - al) < std::abs(mid[ja] - al)) ja = k;
                    if (std::abs(mid[k] - bl) < std::abs(mid[jb] - bl)) jb = k;
                }
                if (ja == jb) break;  // unresolved; keep the current bracket
                if (strand_key(mid[ja]) - strand_key(mid[jb]) < 0) {
                    tl = tm;
                    al = mid[ja];
                    bl = mid[jb];
                } else {
                    th = tm;
                    ah = mid[ja];
                    bh = mid[jb];
                }
            }
            double imd = 0.5 * ((al - bl).imag() + (ah - bh).imag());
            ev.sign = imd > 0 ? +1 : -1;
            tr.events.push_back(ev);
        }
        cur = next;
        t = t2;
        tr.times.push_back(t);
        if (opts.record_positions) tr.positions.push_back(cur);
        dt = std::min(dt * 1.5, dt_cap);
    }
    tr.end = cur;
    if (singular && !tr.collided)
        throw StepUnderflow("singular endpoint reached without the expected collision");
    return tr;
}

CoverPerm CoverPerm::transposition(int a, int b) {
    CoverPerm p;
    std::swap(p.map[a], p.map[b]);
    return p;
}

CoverPerm CoverPerm::then(const CoverPerm& next) const {
    CoverPerm r;
    for (int k = 0; k < 4; ++k) r.map[k] = next.map[map[k]];
    return r;
}

CoverPerm CoverPerm::inverse() const {
    CoverPerm r;
    for (int k = 0; k < 4; ++k) r.map[map[k]] = k;
    return r;
}

bool CoverPerm::is_transposition() const {
    int moved = 0;
    for (int k = 0; k < 4; ++k)
        if (map[k] != k) ++moved;
    return moved == 2;
}

std::string CoverPerm::cycle_string() const {
    std::array<bool, 4> seen{};
    std::ostringstream os;
    bool any = false;
    for (int k = 0; k < 4; ++k) {
        if (seen[k] || map[k] == k) continue;
        os << '(';
        int c = k;
        bool first = true;
        while (!seen[c]) {
            seen[c] = true;
            os << (first ? "" : " ") << c + 1;
            first = false;
            c = map[c];
        }
        os << ')';
        any = true;
    }
    return any ? os.str() : "id";
}

CoverPerm cover_permutation(const PencilConfig& cfg, Cplx v, const PathSpec& loop,
                            const std::vector<Cplx>& fiber_ref) {
    double clearance = std::numeric_limits<double>::infinity();
    {
        UniPoly g = G_poly(cfg, v);
        std::vector<Cplx> branch = poly_roots(g);
        for (const Cplx& r : branch)
            for (std::size_t k = 1; k < loop.waypoints.size(); ++k)
                clearance = std::min(
                    clearance, point_segment_distance(r, loop.waypoints[k - 1], loop.waypoints[k]));
        if (clearance < 1e-4) throw BranchTooClose("loop passes a branch point closer than 1e-4");
    }
    auto family = [&](Cplx x1) { return F_slice(cfg, v, x1); };
    // label the start fiber against the reference
    std::vector<Cplx> fiber = poly_roots(family(loop.at(0.0)));
    std::vector<Cplx> start(4);
    std::array<bool, 4> used{};
    for (int k = 0; k < 4; ++k) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity(), second = bd;
        for (int m = 0; m < 4; ++m) {
            double d = std::abs(fiber[m] - fiber_ref[k]);
            if (d < bd) {
                second = bd;
                bd = d;
                best = m;
            } else
                second = std::min(second, d);
        }
        if (used[best] || bd > 0.5 * second)
            throw AmbiguousMatch("reference fiber labels do not match the start fiber");
        used[best] = true;
        start[k] = fiber[best];
    }
    TrackOptions opts;
    // Keep every chord between parameter samples shorter than the loop's
    // clearance from the branch points, so the sampled polyline stays
    // homotopic to the loop (a step may not shortcut the lasso circle).
    opts.max_plane_step = 0.5 * clearance;
    RootTrack tr = track_roots(family, start, loop, opts);
    CoverPerm perm;
    std::array<bool, 4> taken{};
    for (int k = 0; k < 4; ++k) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int m = 0; m < 4; ++m) {
            double d = std::abs(tr.end[k] - start[m]);
            if (d < bd) {
                bd = d;
                best = m;
            }
        }
        if (taken[best] || bd > 1e-6) throw AmbiguousMatch("loop end fiber does not close up");
        taken[best] = true;
        perm.map[k] = best;
    }
    return perm;
}

std::vector<Cplx> branch_points_a(const PencilConfig& cfg) {
    static const Cplx kAnchors[3] = {{0.709187, 0.642143}, {0.692307, 0.692307}, {0.642143, 0.709187}};
    UniPoly g = G_poly(cfg, 0.0);
    std::vector<Cplx> out(12);
    const Cplx rot(0.0, 1.0);
    for (int j = 0; j < 12; ++j) {
        Cplx anchor = kAnchors[j % 3];
        for (int q = 0; q < j / 3; ++q) anchor *= rot;
        Cplx r = newton_refine(g, anchor, 1e-14, 1e-9);
        if (std::abs(r - anchor) > 1e-4)
            throw DegenerateConfig("branch point drifted away from its published anchor");
        out[j] = r;
    }
    for (int j = 0; j < 12; ++j)
        for (int k = j + 1; k < 12; ++k)
            if (std::abs(out[j] - out[k]) < 1e-6)
                throw DegenerateConfig("branch point anchors collapsed to one root");
    return out;
}

std::vector<CoverPerm> chi_table(const PencilConfig& cfg, double lasso_radius_factor) {
    std::vector<Cplx> a = branch_points_a(cfg);
    std::array<Cplx, 4> s = base_fiber(cfg);
    std::vector<Cplx> ref(s.begin(), s.end());
    std::vector<CoverPerm> out(12);
    for (int j = 0; j < 12; ++j) {
        double nearest = std::abs(a[j]);  // distance to the basepoint
        for (int k = 0; k < 12; ++k)
            if (k != j) nearest = std::min(nearest, std::abs(a[j] - a[k]));
        PathSpec lasso = lasso_path(0.0, a[j], lasso_radius_factor * nearest);
        out[j] = cover_permutation(cfg, 0.0, lasso, ref);
    }
    return out;
}

CoverPerm infinity_permutation(const PencilConfig& cfg, Cplx v, double radius) {
    PathSpec loop;
    loop.waypoints.push_back(0.0);
    const int n = 64;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * kPi * double(k) / double(n);
        loop.waypoints.push_back(radius * Cplx(std::cos(th), std::sin(th)));
    }
    loop.waypoints.push_back(radius);
    loop.waypoints.push_back(0.0);
    std::array<Cplx, 4> s = base_fiber(cfg);
    return cover_permutation(cfg, v, loop, std::vector<Cplx>(s.begin(), s.end()));
}

std::vector<PathSpec> default_mu_paths(const PencilConfig& cfg) {
    // zeta_i: the fourth root of -(1 + omega^i c1^4)^3 with positive real and
    // imaginary parts
    auto zeta = [&](int i) {
        Cplx w = -std::pow(1.0 + omega_pow(i) * cfg.c1_4(), 3);
        Cplx z = std::pow(w, 0.25);
        for (int k = 0; k < 4; ++k) {
            if (z.real() > 0 && z.imag() > 0) return z;
            z *= Cplx(0.0, 1.0);
        }
        throw DegenerateConfig("no fourth root with positive real and imaginary parts");
    };
    Cplx zr = zeta(2), z3 = zeta(3), zt = zeta(1);
    std::vector<DualPoint> duals = line_dual_points(cfg);
    std::vector<Cplx> v(37);
    for (const DualPoint& d : duals) v[d.label] = d.v;
    const Cplx e4 = std::polar(1.0, kPi / 4.0);
    std::vector<PathSpec> out(36);
    const Cplx rot(0.0, 1.0);
    for (int i = 1; i <= 9; ++i) {
        Cplx hub = i <= 3 ? zr : (i <= 6 ? z3 : zt);
        PathSpec p;
        p.waypoints = {0.0, Cplx(1.0 / 3.0, 0.0), e4, hub, v[i]};
        p.terminal_kind = TerminalKind::singular_endpoint;
        Cplx rq = 1.0;
        for (int q = 0; q < 4; ++q) {
            int label = i + 9 * q;
            PathSpec r = p;
            for (Cplx& w : r.waypoints) w *= rq;
            r.waypoints.back() = v[label];  // identical up to rounding; keep the labelled value
            out[label - 1] = r;
            rq *= rot;
        }
    }
    return out;
}

CollisionRow collision_row(const PencilConfig& cfg, int i, const PathSpec& mu,
                           const std::vector<Cplx>& a_start, const TrackOptions& opts) {
    auto family = [&](Cplx v) { return G_poly(cfg, v); };
    TrackOptions topts = opts;
    // The mu polylines pass within ~0.05 of neighbouring dual points; cap the
    // parameter chords well below that so no step can cut such a corner.
    topts.max_plane_step = std::min(topts.max_plane_step, 0.01);
    if (!topts.precise_correct)
        topts.precise_correct = [&cfg](Cplx v, std::vector<Cplx>& z) {
            // Tracked strands start within a third of the local root gap, so
            // plain Newton resolves them; cluster extraction only kicks in
            // below the collision threshold where strands truly merge.
            refine_branch_roots(cfg, v, z, 1e-7);
        };
    RootTrack tr = track_roots(family, a_start, mu, topts);
    return collision_row_from_track(cfg, i, tr, mu.waypoints.back());
}

CollisionRow collision_row_from_track(const PencilConfig& cfg, int i, const RootTrack& tr,
                                      Cplx vi) {
    CollisionRow row;
    row.i = i;
    row.delta = tr.delta;
    row.epsilon = tr.epsilon;
    UniPoly g = G_poly(cfg, vi);
    std::vector<Cplx> roots = poly_roots(g);
    refine_branch_roots(cfg, vi, roots);
    row.distinct_g_roots = cluster_count(roots, 1e-5);
    int mn = 5, mx = 0;
    for (const Cplx& r : roots) {
        std::vector<Cplx> fib = poly_roots(F_slice(cfg, vi, r));
        int c = cluster_count(fib, 1e-4);
        mn = std::min(mn, c);
        mx = std::max(mx, c);
    }
    row.min_fiber_points = mn;
    row.max_fiber_points = mx;
    return row;
}

std::vector<CollisionRow> collision_table(const PencilConfig& cfg, int threads,
                                          const TrackOptions& opts) {
    std::vector<PathSpec> mu = default_mu_paths(cfg);
    std::vector<Cplx> a = branch_points_a(cfg);
    std::vector<CollisionRow> rows(36);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
    for (int i = 1; i <= 36; ++i) {
        try {
            rows[i - 1] = collision_row(cfg, i, mu[i - 1], a, opts);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return rows;
}

std::vector<CollisionRow> collision_table_serial(const PencilConfig& cfg,
                                                 const TrackOptions& opts) {
    std::vector<PathSpec> mu = default_mu_paths(cfg);
    std::vector<Cplx> a = branch_points_a(cfg);
    std::vector<CollisionRow> rows;
    rows.reserve(36);
    for (int i = 1; i <= 36; ++i) rows.push_back(collision_row(cfg, i, mu[i - 1], a, opts));
    return rows;
}

std::vector<BraidLetter> braid_word(const RootTrack& track) {
    std::vector<BraidLetter> word;
    word.reserve(track.events.size());
    for (const CrossEvent& ev : track.events) word.push_back({ev.position, ev.sign});
    return word;
}

}  // namespace fermat
