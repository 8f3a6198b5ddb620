#include "fermat/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace fermat {

namespace {

double point_segment_distance(Cplx p, Cplx a, Cplx b) {
    Cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

bool re_im_less(Cplx a, Cplx b) { return strand_less(a, b); }

}  // namespace

FreeWord word_reduce(FreeWord w) {
    FreeWord out;
    for (int letter : w) {
        if (!out.empty() && out.back() == -letter)
            out.pop_back();
        else
            out.push_back(letter);
    }
    return out;
}

FreeWord word_mul(const FreeWord& a, const FreeWord& b) {
    FreeWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return word_reduce(std::move(w));
}

FreeWord word_inverse(const FreeWord& a) {
    FreeWord w(a.rbegin(), a.rend());
    for (int& letter : w) letter = -letter;
    return w;
}

CoverPerm chi_eval(const FreeWord& w, const std::vector<CoverPerm>& letter_perms) {
    CoverPerm r = CoverPerm::identity();
    for (int letter : w) {
        const CoverPerm& g = letter_perms.at(std::size_t(std::abs(letter) - 1));
        r = r.then(letter > 0 ? g : g.inverse());
    }
    return r;
}

FreeWord GeneratorTuple::product_word() const {
    FreeWord w;
    for (const FreeWord& g : words) w = word_mul(w, g);
    return w;
}

CoverPerm GeneratorTuple::product_perm() const {
    CoverPerm r = CoverPerm::identity();
    for (const FreeWord& g : words) r = r.then(chi_eval(g, letter_perms));
    return r;
}

GeneratorTuple ordered_basis(const PencilConfig& cfg, Cplx v, const std::vector<Cplx>& punctures,
                             Cplx basepoint) {
    const int n = int(punctures.size());
    double min_im = punctures[0].imag();
    for (const Cplx& p : punctures) min_im = std::min(min_im, p.imag());
    if (!(basepoint.imag() < min_im - 0.5))
        throw BasisArcsCross("basepoint is not below the punctures");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return re_im_less(punctures[a], punctures[b]); });
    std::vector<Cplx> pts(n);
    for (int p = 0; p < n; ++p) pts[p] = punctures[order[p]];

    std::vector<double> radius(n);
    for (int p = 0; p < n; ++p) {
        double d = std::min(std::abs(pts[p] - basepoint), 0.5 * (pts[p].imag() - basepoint.imag()));
        for (int q = 0; q < n; ++q)
            if (q != p) d = std::min(d, std::abs(pts[p] - pts[q]));
        radius[p] = 0.25 * d;
    }

    // Comb lassos: run along the basepoint's horizontal line to below the
    // puncture, then climb the vertical tine. A puncture sitting in the tine's
    // Re-band below the target is dodged with a square detour, passing on the
    // side its own tuple slot dictates (earlier slots sit to the left).
    auto tine = [&](int p) {
        const Cplx a = pts[p];
        const double x = a.real();
        PathSpec lasso;
        std::vector<Cplx>& w = lasso.waypoints;
        w.push_back(basepoint);
        w.push_back(Cplx(x, basepoint.imag()));
        std::vector<int> blockers;
        for (int k = 0; k < n; ++k)
            if (k != p && pts[k].imag() < a.imag() &&
                std::abs(pts[k].real() - x) < 1.5 * radius[k])
                blockers.push_back(k);
        std::sort(blockers.begin(), blockers.end(),
                  [&](int i, int j) { return pts[i].imag() < pts[j].imag(); });
        for (int k : blockers) {
            double q = 2.0 * radius[k];
            double side = (k < p) ? +1.0 : -1.0;  // left-of blockers are passed on the right
            w.push_back(Cplx(x, pts[k].imag() - q));
            w.push_back(Cplx(pts[k].real() + side * q, pts[k].imag() - q));
            w.push_back(Cplx(pts[k].real() + side * q, pts[k].imag() + q));
            w.push_back(Cplx(x, pts[k].imag() + q));
        }
        const std::size_t approach_end = w.size();
        w.push_back(Cplx(x, a.imag() - radius[p]));
        const int segs = 24;
        for (int s = 1; s <= segs; ++s) {
            double th = -0.5 * M_PI + 2.0 * M_PI * double(s) / double(segs);
            w.push_back(a + radius[p] * Cplx(std::cos(th), std::sin(th)));
        }
        for (std::size_t s = approach_end; s-- > 0;) w.push_back(w[s]);
        // Clearance: the walk must stay out of every other puncture's disk.
        for (std::size_t s = 0; s + 1 < w.size(); ++s)
            for (int k = 0; k < n; ++k) {
                if (k == p) continue;
                if (point_segment_distance(pts[k], w[s], w[s + 1]) < 0.9 * radius[k])
                    throw BasisArcsCross("lasso tine enters another puncture's disk");
            }
        return lasso;
    };

    std::vector<Cplx> fiber = poly_roots(F_slice(cfg, v, basepoint));
    std::sort(fiber.begin(), fiber.end(), re_im_less);

    GeneratorTuple t;
    t.words.resize(n);
    t.perms.resize(n);
    for (int p = 0; p < n; ++p) {
        t.words[p] = {p + 1};
        t.perms[p] = cover_permutation(cfg, v, tine(p), fiber);
    }
    t.letter_perms = t.perms;

    // Boundary consistency: the counterclockwise circle around everything,
    // based at the basepoint through a rightward run (which stays below all
    // punctures), must equal the product of the lassos in counterclockwise
    // (descending-tuple) order.
    double big_r = 0.5;
    for (const Cplx& p : pts) big_r = std::max(big_r, std::abs(p - basepoint) + 0.5);
    PathSpec big;
    big.waypoints.push_back(basepoint);
    const int segs = 64;
    for (int k = 0; k <= segs; ++k) {
        double th = 2.0 * M_PI * double(k) / double(segs);
        big.waypoints.push_back(basepoint + big_r * Cplx(std::cos(th), std::sin(th)));
    }
    big.waypoints.push_back(basepoint);
    CoverPerm boundary = cover_permutation(cfg, v, big, fiber);
    CoverPerm up = CoverPerm::identity(), down = CoverPerm::identity();
    for (int p = 0; p < n; ++p) up = up.then(t.perms[p]);
    for (int p = n - 1; p >= 0; --p) down = down.then(t.perms[p]);
    if (!(up == boundary) && !(down == boundary))
        throw BasisArcsCross("ordered lasso product does not match the boundary monodromy");
    return t;
}

GeneratorTuple hurwitz_move(const GeneratorTuple& t, int p, int sign) {
    const int n = int(t.words.size());
    if (p < 1 || p >= n) throw std::out_of_range("hurwitz_move: slot out of range");
    GeneratorTuple r = t;
    const FreeWord& wp = t.words[std::size_t(p - 1)];
    const FreeWord& wq = t.words[std::size_t(p)];
    if (sign >= 0) {
        r.words[std::size_t(p - 1)] = word_mul(word_mul(wp, wq), word_inverse(wp));
        r.words[std::size_t(p)] = wp;
    } else {
        r.words[std::size_t(p - 1)] = wq;
        r.words[std::size_t(p)] = word_mul(word_mul(word_inverse(wq), wp), wq);
    }
    r.perms[std::size_t(p - 1)] = chi_eval(r.words[std::size_t(p - 1)], t.letter_perms);
    r.perms[std::size_t(p)] = chi_eval(r.words[std::size_t(p)], t.letter_perms);
    return r;
}

GeneratorTuple transport(const GeneratorTuple& t, const std::vector<BraidLetter>& word) {
    GeneratorTuple r = t;
    // A positive crossing (rightward strand passing above) acts on the
    // geometric basis as the inverse Artin move: the lasso of the strand that
    // stays below is conjugated by the one passing over it.
    for (const BraidLetter& l : word) r = hurwitz_move(r, l.position, -l.sign);
    return r;
}

VanishingLasso vanishing_lasso(const GeneratorTuple& base, const RootTrack& track) {
    if (!track.collided) throw NonAdjacentCollision("track did not end in a collision");
    GeneratorTuple t = transport(base, braid_word(track));

    const int n = int(track.end.size());
    std::vector<int> rank(n);  // label -> 1-based slot in (Re, Im) order
    {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return re_im_less(track.end[a], track.end[b]); });
        for (int s = 0; s < n; ++s) rank[order[s]] = s + 1;
    }
    int pa = rank[track.delta - 1], pb = rank[track.epsilon - 1];
    if (pa > pb) std::swap(pa, pb);
    if (pb != pa + 1)
        throw NonAdjacentCollision("colliding strands are not adjacent in the final order");

    VanishingLasso out;
    out.position = pa;
    const FreeWord& wp = t.words[std::size_t(pa - 1)];
    const FreeWord& wq = t.words[std::size_t(pa)];
    CoverPerm cp = t.eval(wp), cq = t.eval(wq);
    if (!(cp == cq) || !cp.is_transposition())
        throw UnequalLocalMonodromy("colliding lassos carry different local monodromies: " +
                                    cp.cycle_string() + " vs " + cq.cycle_string());
    out.tau = cp;
    out.word = word_mul(wp, wq);
    out.sheet_a = -1;
    for (int k = 0; k < 4; ++k)
        if (cp(k) != k) {
            if (out.sheet_a < 0)
                out.sheet_a = k;
            else
                out.sheet_b = k;
        }
    return out;
}

bool HomologyCycle::is_zero() const {
    for (std::int64_t c : coords)
        if (c != 0) return false;
    return true;
}

bool HomologyCycle::primitive() const {
    std::int64_t g = 0;
    for (std::int64_t c : coords) g = std::gcd(g, std::llabs(c));
    return g == 1;
}

std::int64_t IntersectionForm::pair(const HomologyCycle& x, const HomologyCycle& y) const {
    std::int64_t s = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) s += x.coords[std::size_t(i)] * matrix[std::size_t(i)][std::size_t(j)] * y.coords[std::size_t(j)];
    return s;
}

bool IntersectionForm::antisymmetric() const {
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (matrix[std::size_t(i)][std::size_t(j)] != -matrix[std::size_t(j)][std::size_t(i)]) return false;
    return true;
}

std::int64_t IntersectionForm::det() const {
    // Bareiss fraction-free elimination on a copy.
    std::int64_t a[6][6];
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a[i][j] = matrix[std::size_t(i)][std::size_t(j)];
    std::int64_t prev = 1, sign = 1;
    for (int k = 0; k < 5; ++k) {
        if (a[k][k] == 0) {
            int s = -1;
            for (int r = k + 1; r < 6; ++r)
                if (a[r][k] != 0) { s = r; break; }
            if (s < 0) return 0;
            for (int j = 0; j < 6; ++j) std::swap(a[k][j], a[s][j]);
            sign = -sign;
        }
        for (int i = k + 1; i < 6; ++i)
            for (int j = k + 1; j < 6; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[5][5];
}

namespace {

struct IntMat {
    int rows = 0, cols = 0;
    std::vector<std::vector<std::int64_t>> m;
    IntMat(int r, int c) : rows(r), cols(c), m(std::size_t(r), std::vector<std::int64_t>(std::size_t(c), 0)) {}
    std::int64_t& at(int r, int c) { return m[std::size_t(r)][std::size_t(c)]; }
    std::int64_t at(int r, int c) const { return m[std::size_t(r)][std::size_t(c)]; }
};

/// Smith reduction of A with recorded left transform: returns (rank, U, Uinv)
/// with U A V diagonal for some unimodular V never materialized.
struct SmithLeft {
    int rank = 0;
    IntMat U, Uinv;
    std::vector<std::int64_t> divisors;
    SmithLeft(int n) : U(n, n), Uinv(n, n) {
        for (int i = 0; i < n; ++i) U.at(i, i) = Uinv.at(i, i) = 1;
    }
};

SmithLeft smith_left(IntMat A) {
    const int m = A.rows, f = A.cols;
    SmithLeft out(m);
    auto row_swap = [&](int a, int b) {
        if (a == b) return;
        std::swap(A.m[std::size_t(a)], A.m[std::size_t(b)]);
        std::swap(out.U.m[std::size_t(a)], out.U.m[std::size_t(b)]);
        for (int i = 0; i < m; ++i) std::swap(out.Uinv.at(i, a), out.Uinv.at(i, b));
    };
    auto row_addmul = [&](int dst, int src, std::int64_t q) {  // row dst += q * row src
        if (q == 0) return;
        for (int j = 0; j < f; ++j) A.at(dst, j) += q * A.at(src, j);
        for (int j = 0; j < m; ++j) out.U.at(dst, j) += q * out.U.at(src, j);
        for (int i = 0; i < m; ++i) out.Uinv.at(i, src) -= q * out.Uinv.at(i, dst);
    };
    auto row_negate = [&](int r) {
        for (int j = 0; j < f; ++j) A.at(r, j) = -A.at(r, j);
        for (int j = 0; j < m; ++j) out.U.at(r, j) = -out.U.at(r, j);
        for (int i = 0; i < m; ++i) out.Uinv.at(i, r) = -out.Uinv.at(i, r);
    };
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (int i = 0; i < m; ++i) std::swap(A.at(i, a), A.at(i, b));
    };
    auto col_addmul = [&](int dst, int src, std::int64_t q) {
        if (q == 0) return;
        for (int i = 0; i < m; ++i) A.at(i, dst) += q * A.at(i, src);
    };

    int t = 0;
    while (t < m && t < f) {
        int pr = -1, pc = -1;
        std::int64_t best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < f; ++j)
                if (A.at(i, j) != 0 && (pr < 0 || std::llabs(A.at(i, j)) < best)) {
                    pr = i;
                    pc = j;
                    best = std::llabs(A.at(i, j));
                }
        if (pr < 0) break;
        row_swap(t, pr);
        col_swap(t, pc);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int i = t + 1; i < m; ++i) {
                if (A.at(i, t) == 0) continue;
                std::int64_t q = A.at(i, t) / A.at(t, t);
                row_addmul(i, t, -q);
                if (A.at(i, t) != 0) {  // remainder became the smaller pivot
                    row_swap(t, i);
                    dirty = true;
                }
            }
            for (int j = t + 1; j < f; ++j) {
                if (A.at(t, j) == 0) continue;
                std::int64_t q = A.at(t, j) / A.at(t, t);
                col_addmul(j, t, -q);
                if (A.at(t, j) != 0) {
                    col_swap(t, j);
                    dirty = true;
                }
            }
        }
        if (A.at(t, t) < 0) row_negate(t);
        out.divisors.push_back(A.at(t, t));
        ++t;
    }
    out.rank = t;
    return out;
}

}  // namespace

RibbonSurface build_ribbon_surface(const std::vector<Cplx>& punctures, Cplx basepoint,
                                   const std::vector<CoverPerm>& perms, const CoverPerm& infinity,
                                   int sheets) {
    const int n = int(punctures.size());
    if (int(perms.size()) != n) throw std::invalid_argument("one permutation per puncture required");
    RibbonSurface s;
    s.sheets = sheets;
    s.letter_perms = perms;
    s.infinity_perm = infinity;
    const int arcs = n + 1;  // puncture arcs plus the arc to infinity
    s.E = arcs * sheets;

    // Transitivity of the cover (connectivity of the surface).
    {
        std::vector<char> seen(std::size_t(sheets), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int k = 0; k < n; ++k) {
                for (int w : {perms[std::size_t(k)](v), perms[std::size_t(k)].inverse()(v)})
                    if (!seen[std::size_t(w)]) {
                        seen[std::size_t(w)] = 1;
                        stack.push_back(w);
                    }
            }
        }
        for (int v = 0; v < sheets; ++v)
            if (!seen[std::size_t(v)]) throw NotTransitive("cover permutations do not act transitively");
    }

    // Vertices: sheets lifts of the basepoint, then one vertex per orbit of
    // each arc monodromy (ramification merges sheets).
    std::vector<int> head_vertex(std::size_t(s.E), -1);
    int vid = sheets;
    std::vector<std::vector<std::vector<int>>> arc_orbits{std::size_t(arcs)};
    for (int k = 0; k < arcs; ++k) {
        const CoverPerm& rho = (k < n) ? perms[std::size_t(k)] : infinity;
        std::vector<char> used(std::size_t(sheets), 0);
        for (int v0 = 0; v0 < sheets; ++v0) {
            if (used[std::size_t(v0)]) continue;
            std::vector<int> orbit;
            int v = v0;
            do {
                used[std::size_t(v)] = 1;
                orbit.push_back(v);
                v = rho(v);
            } while (v != v0);
            for (int w : orbit) head_vertex[std::size_t(s.edge_id(k, w))] = vid;
            arc_orbits[std::size_t(k)].push_back(orbit);
            ++vid;
        }
    }
    s.V = vid;

    // Expected Euler characteristic by Riemann-Hurwitz over the sphere.
    int expected_euler = 2 * sheets;
    for (int k = 0; k < arcs; ++k)
        expected_euler -= sheets - int(arc_orbits[std::size_t(k)].size());

    std::vector<int> edge_tail(std::size_t(s.E)), edge_head(std::size_t(s.E));
    for (int k = 0; k < arcs; ++k)
        for (int sh = 0; sh < sheets; ++sh) {
            int e = s.edge_id(k, sh);
            edge_tail[std::size_t(e)] = sh;
            edge_head[std::size_t(e)] = head_vertex[std::size_t(e)];
        }

    // Base rotation at the basepoint for the comb basis: the nested
    // horizontal runs leave counterclockwise in descending slot order, with
    // the arc to infinity (straight down) closing the cycle.
    (void)punctures;
    (void)basepoint;
    std::vector<int> fan;
    for (int k = n - 1; k >= 0; --k) fan.push_back(k);
    fan.push_back(n);

    // Rotation system on darts: dart 2e at the tail (basepoint lift), 2e+1 at
    // the head (branch-point lift). Basepoint lifts copy the base fan order;
    // a branch vertex cycles its sheets by the local monodromy.
    std::vector<std::vector<int>> rot{std::size_t(s.V)};
    for (int sh = 0; sh < sheets; ++sh)
        for (int k : fan) rot[std::size_t(sh)].push_back(2 * s.edge_id(k, sh));
    for (int k = 0; k < arcs; ++k)
        for (const std::vector<int>& orbit : arc_orbits[std::size_t(k)]) {
            int v = head_vertex[std::size_t(s.edge_id(k, orbit[0]))];
            for (int sh : orbit) rot[std::size_t(v)].push_back(2 * s.edge_id(k, sh) + 1);
        }

    // Successor position of each dart in its vertex rotation.
    std::vector<int> succ(std::size_t(2 * s.E), -1);
    for (const std::vector<int>& r : rot)
        for (std::size_t i = 0; i < r.size(); ++i) succ[std::size_t(r[i])] = r[(i + 1) % r.size()];

    // Faces: orbits of d -> successor of the opposite dart.
    std::vector<int> face_of(std::size_t(2 * s.E), -1);
    std::vector<std::vector<int>> faces;
    for (int d0 = 0; d0 < 2 * s.E; ++d0) {
        if (face_of[std::size_t(d0)] >= 0) continue;
        std::vector<int> walk;
        int d = d0;
        do {
            face_of[std::size_t(d)] = int(faces.size());
            walk.push_back(d);
            d = succ[std::size_t(d ^ 1)];
        } while (d != d0);
        faces.push_back(std::move(walk));
    }
    s.F = int(faces.size());
    s.euler = s.V - s.E + s.F;
    if (s.euler != expected_euler || (2 - s.euler) % 2 != 0)
        throw EulerMismatch("Euler characteristic " + std::to_string(s.euler) +
                            " does not match Riemann-Hurwitz value " +
                            std::to_string(expected_euler));
    s.genus = (2 - s.euler) / 2;
    s.h1_rank = 2 * s.genus;

    // Spanning tree (BFS from basepoint lift 0).
    std::vector<char> in_tree(std::size_t(s.E), 0), visited(std::size_t(s.V), 0);
    {
        std::vector<std::vector<int>> incident{std::size_t(s.V)};
        for (int e = 0; e < s.E; ++e) {
            incident[std::size_t(edge_tail[std::size_t(e)])].push_back(e);
            incident[std::size_t(edge_head[std::size_t(e)])].push_back(e);
        }
        std::vector<int> queue{0};
        visited[0] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (int e : incident[std::size_t(v)]) {
                int w = edge_tail[std::size_t(e)] == v ? edge_head[std::size_t(e)] : edge_tail[std::size_t(e)];
                if (!visited[std::size_t(w)]) {
                    visited[std::size_t(w)] = 1;
                    in_tree[std::size_t(e)] = 1;
                    queue.push_back(w);
                }
            }
        }
        for (int v = 0; v < s.V; ++v)
            if (!visited[std::size_t(v)]) throw NotTransitive("lifted graph is disconnected");
    }
    s.cycle_rank = s.E - s.V + 1;
    s.nontree_index.assign(std::size_t(s.E), -1);
    for (int e = 0; e < s.E; ++e)
        if (!in_tree[std::size_t(e)]) {
            s.nontree_index[std::size_t(e)] = int(s.nontree.size());
            s.nontree.push_back(e);
        }

    // Contract the spanning tree in the ribbon structure: splice the head
    // vertex rotation into the tail vertex at the contracted darts. The
    // result is a one-vertex fatgraph on the non-tree loops.
    {
        std::vector<int> cls(std::size_t(s.V), 0);
        std::iota(cls.begin(), cls.end(), 0);
        std::function<int(int)> find = [&](int v) {
            while (cls[std::size_t(v)] != v) v = cls[std::size_t(v)] = cls[std::size_t(cls[std::size_t(v)])];
            return v;
        };
        for (int e = 0; e < s.E; ++e) {
            if (!in_tree[std::size_t(e)]) continue;
            int u = find(edge_tail[std::size_t(e)]);
            int v = find(edge_head[std::size_t(e)]);
            int dt = 2 * e, dh = 2 * e + 1;
            std::vector<int>& Lu = rot[std::size_t(u)];
            std::vector<int>& Lv = rot[std::size_t(v)];
            std::size_t it = std::size_t(std::find(Lu.begin(), Lu.end(), dt) - Lu.begin());
            std::size_t ih = std::size_t(std::find(Lv.begin(), Lv.end(), dh) - Lv.begin());
            std::vector<int> merged;
            merged.insert(merged.end(), Lu.begin(), Lu.begin() + long(it));
            for (std::size_t j = 1; j < Lv.size(); ++j)
                merged.push_back(Lv[(ih + j) % Lv.size()]);
            merged.insert(merged.end(), Lu.begin() + long(it) + 1, Lu.end());
            cls[std::size_t(v)] = u;
            rot[std::size_t(u)] = std::move(merged);
            rot[std::size_t(v)].clear();
        }
        const std::vector<int>& R = rot[std::size_t(find(0))];
        if (int(R.size()) != 2 * s.cycle_rank)
            throw EulerMismatch("tree contraction left a wrong number of darts");
        std::vector<int> pos(std::size_t(2 * s.E), -1);
        for (std::size_t i = 0; i < R.size(); ++i) pos[std::size_t(R[i])] = int(i);
        const int M = int(R.size());
        s.omega.assign(std::size_t(s.cycle_rank), std::vector<std::int64_t>(std::size_t(s.cycle_rank), 0));
        for (int i = 0; i < s.cycle_rank; ++i)
            for (int j = 0; j < s.cycle_rank; ++j) {
                if (i == j) continue;
                int ei = s.nontree[std::size_t(i)], ej = s.nontree[std::size_t(j)];
                int ti = pos[std::size_t(2 * ei)], hi = pos[std::size_t(2 * ei + 1)];
                int tj = pos[std::size_t(2 * ej)], hj = pos[std::size_t(2 * ej + 1)];
                int a = ((hi - ti) % M + M) % M;
                int b = ((tj - ti) % M + M) % M;
                int c = ((hj - ti) % M + M) % M;
                bool b_in = b > 0 && b < a;
                bool c_in = c > 0 && c < a;
                if (b_in && !c_in)
                    s.omega[std::size_t(i)][std::size_t(j)] = 1;
                else if (c_in && !b_in)
                    s.omega[std::size_t(i)][std::size_t(j)] = -1;
            }
    }

    // Face relations in fundamental-cycle coordinates.
    IntMat Rmat(s.cycle_rank, s.F);
    for (int fi = 0; fi < s.F; ++fi)
        for (int d : faces[std::size_t(fi)]) {
            int e = d / 2;
            int idx = s.nontree_index[std::size_t(e)];
            if (idx >= 0) Rmat.at(idx, fi) += (d & 1) ? -1 : +1;
        }
    for (int fi = 0; fi < s.F; ++fi)
        for (int i = 0; i < s.cycle_rank; ++i) {
            std::int64_t v = 0;
            for (int j = 0; j < s.cycle_rank; ++j)
                v += s.omega[std::size_t(i)][std::size_t(j)] * Rmat.at(j, fi);
            if (v != 0)
                throw RankMismatch("face boundary is not isotropic for the fatgraph pairing");
        }

    SmithLeft sl = smith_left(Rmat);
    for (std::int64_t d : sl.divisors)
        if (d != 1) throw RankMismatch("face relation lattice has a nontrivial divisor");
    if (s.cycle_rank - sl.rank != s.h1_rank)
        throw RankMismatch("homology rank " + std::to_string(s.cycle_rank - sl.rank) +
                           " does not equal 2 * genus");
    s.U = sl.U.m;
    s.Uinv = sl.Uinv.m;

    // Intersection form on the quotient basis (columns of Uinv past the rank).
    for (int a = 0; a < s.h1_rank; ++a)
        for (int b = 0; b < s.h1_rank; ++b) {
            std::int64_t v = 0;
            for (int i = 0; i < s.cycle_rank; ++i)
                for (int j = 0; j < s.cycle_rank; ++j)
                    v += s.Uinv[std::size_t(i)][std::size_t(sl.rank + a)] *
                         s.omega[std::size_t(i)][std::size_t(j)] *
                         s.Uinv[std::size_t(j)][std::size_t(sl.rank + b)];
            s.form.matrix[std::size_t(a)][std::size_t(b)] = v;
        }
    if (!s.form.antisymmetric()) throw RankMismatch("intersection form is not antisymmetric");
    if (s.h1_rank == 6 && s.form.det() != 1)
        throw RankMismatch("intersection form is not unimodular");
    return s;
}

HomologyCycle RibbonSurface::reduce(const std::vector<std::int64_t>& edge_vec) const {
    std::vector<std::int64_t> c(std::size_t(cycle_rank), 0);
    for (int e = 0; e < E; ++e) {
        int idx = nontree_index[std::size_t(e)];
        if (idx >= 0) c[std::size_t(idx)] = edge_vec[std::size_t(e)];
    }
    const int rank = cycle_rank - h1_rank;
    HomologyCycle h;
    if (h1_rank > 6) throw RankMismatch("homology rank exceeds the fixed coordinate size");
    for (int a = 0; a < h1_rank; ++a) {
        std::int64_t v = 0;
        for (int j = 0; j < cycle_rank; ++j) v += U[std::size_t(rank + a)][std::size_t(j)] * c[std::size_t(j)];
        h.coords[std::size_t(a)] = v;
    }
    return h;
}

std::vector<std::int64_t> lift_word_edges(const RibbonSurface& s, const FreeWord& word,
                                          int start_sheet) {
    std::vector<std::int64_t> vec(std::size_t(s.E), 0);
    int sheet = start_sheet;
    for (int letter : word) {
        int k = std::abs(letter) - 1;
        const CoverPerm& rho = s.letter_perms.at(std::size_t(k));
        int next = (letter > 0) ? rho(sheet) : rho.inverse()(sheet);
        vec[std::size_t(s.edge_id(k, sheet))] += 1;
        vec[std::size_t(s.edge_id(k, next))] -= 1;
        sheet = next;
    }
    if (sheet != start_sheet)
        throw NotClosed("word moves sheet " + std::to_string(start_sheet + 1) + " to " +
                        std::to_string(sheet + 1));
    return vec;
}

HomologyCycle lift_word_to_cycle(const RibbonSurface& s, const FreeWord& word, int start_sheet) {
    return s.reduce(lift_word_edges(s, word, start_sheet));
}

HomologyCycle vanishing_cycle_class(const RibbonSurface& s, const VanishingLasso& lasso) {
    // The two lifts are the boundary circles of the annulus over the collision
    // disk. With the orientation induced by the projected loop they form the
    // oriented boundary of the annulus and so are chain-level negatives; the
    // "parallel circles" comparison needs the second one traversed backwards.
    HomologyCycle ca = lift_word_to_cycle(s, lasso.word, lasso.sheet_a);
    HomologyCycle cb = lift_word_to_cycle(s, word_inverse(lasso.word), lasso.sheet_b);
    if (!(ca == cb)) throw LiftMismatch("the two sheet-lifts of the collision lasso differ");
    if (ca.is_zero()) throw NullClass("vanishing cycle class is zero");
    return ca;
}

}  // namespace fermat
