#include "fermat/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace fermat {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

Cplx principal_root(Cplx z, int n) {
    if (z == Cplx(0.0, 0.0)) return z;
    double r = std::pow(std::abs(z), 1.0 / n);
    double th = std::arg(z) / n;
    return Cplx(r * std::cos(th), r * std::sin(th));
}

}  // namespace

Rational Rational::pow4() const { return Rational{ipow(num, 4), ipow(den, 4)}; }

double Rational::abs_pow4() const {
    return double(ipow(std::abs(num), 4)) / double(ipow(std::abs(den), 4));
}

double PencilConfig::c1_3() const { return double(ipow(c1.num, 3)) / double(ipow(c1.den, 3)); }
double PencilConfig::c1_4() const { return double(ipow(c1.num, 4)) / double(ipow(c1.den, 4)); }
double PencilConfig::c2_3() const { return double(ipow(c2.num, 3)) / double(ipow(c2.den, 3)); }
double PencilConfig::c2_4() const { return double(ipow(c2.num, 4)) / double(ipow(c2.den, 4)); }
double PencilConfig::c2_12() const {
    double t = c2_4();
    return t * t * t;
}
double PencilConfig::assumption_value() const { return c1.abs_pow4() + c2.abs_pow4(); }

Cplx omega_pow(int k) {
    k = ((k % 3) + 3) % 3;
    static const Cplx w[3] = {Cplx(1.0, 0.0), Cplx(-0.5, std::sqrt(3.0) / 2.0),
                              Cplx(-0.5, -std::sqrt(3.0) / 2.0)};
    return w[k];
}

Cplx dual_membership(const std::array<Cplx, 4>& alpha) {
    std::array<Cplx, 4> beta4;
    for (int i = 0; i < 4; ++i) {
        Cplx b = principal_root(alpha[i], 3);
        beta4[i] = b * b * b * b;
    }
    Cplx prod(1.0, 0.0);
    for (int i1 = 0; i1 < 3; ++i1)
        for (int i2 = 0; i2 < 3; ++i2)
            for (int i3 = 0; i3 < 3; ++i3)
                prod *= beta4[0] + omega_pow(i1) * beta4[1] + omega_pow(i2) * beta4[2] +
                        omega_pow(i3) * beta4[3];
    return prod;
}

namespace {

struct RawDual {
    Cplx v;
    int i1, i2;
};

// 36 roots of the nine quartic factors v^4 + (1 + w^i1 c1^4 + w^i2 c2^4)^3.
std::vector<RawDual> raw_dual_points(const PencilConfig& cfg) {
    std::vector<RawDual> pts;
    for (int i1 = 0; i1 < 3; ++i1) {
        for (int i2 = 0; i2 < 3; ++i2) {
            Cplx base = 1.0 + omega_pow(i1) * cfg.c1_4() + omega_pow(i2) * cfg.c2_4();
            if (std::abs(base) < 1e-12)
                throw DegenerateConfig("factor constant vanishes at (i1,i2)=(" +
                                       std::to_string(i1) + "," + std::to_string(i2) + ")");
            Cplx rhs = -base * base * base;
            Cplx r0 = principal_root(rhs, 4);
            const Cplx i_unit(0.0, 1.0);
            Cplx r = r0;
            for (int k = 0; k < 4; ++k) {
                pts.push_back({r, i1, i2});
                r *= i_unit;
            }
        }
    }
    return pts;
}

int nearest_index(const std::vector<RawDual>& pts, Cplx target, const std::vector<bool>& used) {
    int best = -1;
    double bd = 1e300;
    for (size_t k = 0; k < pts.size(); ++k) {
        if (used[k]) continue;
        double d = std::abs(pts[k].v - target);
        if (d < bd) {
            bd = d;
            best = int(k);
        }
    }
    return best;
}

}  // namespace

bool transversality_check(const Rational& c1, const Rational& c2) {
    PencilConfig cfg{c1, c2};
    std::vector<RawDual> pts;
    try {
        pts = raw_dual_points(cfg);
    } catch (const DegenerateConfig&) {
        return false;
    }
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(pts[a].v - pts[b].v) <= 1e-8) return false;
    return true;
}

std::vector<DualPoint> line_dual_points(const PencilConfig& cfg) {
    std::vector<RawDual> pts = raw_dual_points(cfg);
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b)
            if (std::abs(pts[a].v - pts[b].v) <= 1e-8)
                throw DegenerateConfig("dual points collide across factors");

    // Published anchors v_1..v_5, reflections v_6..v_9, then quarter turns.
    std::array<Cplx, 10> anchor{};  // 1-based
    anchor[1] = Cplx(0.600851, 0.315483);
    anchor[2] = Cplx(0.963952, 0.064039);
    anchor[3] = Cplx(0.999689, 0.470655);
    anchor[4] = Cplx(1.059535, 0.794167);
    anchor[5] = Cplx(1.145495, 1.145495);
    for (int i = 6; i <= 9; ++i)
        anchor[i] = Cplx(anchor[10 - i].imag(), anchor[10 - i].real());

    const Cplx i_unit(0.0, 1.0);
    std::vector<bool> used(pts.size(), false);
    std::vector<DualPoint> out(36);
    std::array<Cplx, 37> vlab{};
    for (int i = 1; i <= 36; ++i) {
        Cplx target = (i <= 9) ? anchor[i] : i_unit * vlab[i - 9];
        int k = nearest_index(pts, target, used);
        used[k] = true;
        vlab[i] = pts[k].v;
        out[i - 1] = DualPoint{pts[k].v, pts[k].i1, pts[k].i2, i};
        if (i <= 9 && std::abs(pts[k].v - target) > 1e-4)
            throw DegenerateConfig("nearest dual point is far from the published anchor v_" +
                                   std::to_string(i));
    }
    return out;
}

bool lemma41_check(const PencilConfig& cfg) {
    // |c1|^4 + |c2|^4 < 1 in exact integers.
    Rational a = cfg.c1.pow4(), b = cfg.c2.pow4();
    std::int64_t na = std::abs(a.num), nb = std::abs(b.num);
    if (na * b.den + nb * a.den >= a.den * b.den) return false;

    for (int j = 0; j < 3; ++j) {
        Cplx u = cfg.c1_4() * omega_pow(j) + cfg.c2_4();
        Cplx w = cfg.c1_4() + cfg.c2_4() * omega_pow(j);
        if (std::abs(u * u * u + 1.0) < 1e-12) return false;
        if (std::abs(w * w * w + 1.0) < 1e-12) return false;
    }

    // disc_{x2} [(c1^3 + c2^3 x2)^4 + 1 + x2^4] != 0 (no branching over [1:0]).
    double p = cfg.c1_3(), q = cfg.c2_3();
    std::vector<Cplx> co(5, Cplx(0.0, 0.0));
    // (p + q x)^4 expansion plus 1 + x^4.
    co[0] = std::pow(p, 4) + 1.0;
    co[1] = 4.0 * std::pow(p, 3) * q;
    co[2] = 6.0 * p * p * q * q;
    co[3] = 4.0 * p * std::pow(q, 3);
    co[4] = std::pow(q, 4) + 1.0;
    UniPoly E(std::move(co));
    Cplx d = discriminant(E);
    return std::abs(d) > 1e-10;
}

UniPoly F_slice(const PencilConfig& cfg, Cplx v, Cplx x1) {
    Cplx w = cfg.c1_3() * x1 + v;
    double q3 = cfg.c2_3();
    double q6 = q3 * q3, q9 = q6 * q3, q12 = q9 * q3;
    std::vector<Cplx> co(5);
    co[0] = w * w * w * w + x1 * x1 * x1 * x1 + 1.0;
    co[1] = 4.0 * q3 * w * w * w;
    co[2] = 6.0 * q6 * w * w;
    co[3] = 4.0 * q9 * w;
    co[4] = Cplx(q12 + 1.0, 0.0);
    return UniPoly(std::move(co));
}

UniPoly G_poly(const PencilConfig& cfg, Cplx v) {
    // 25 nodes on the circle |x1| = 1.3: the Vandermonde system is a scaled
    // DFT, so the interpolation is an inverse DFT followed by radius scaling.
    constexpr int kNodes = 25;
    constexpr double kRadius = 1.3;
    std::array<Cplx, kNodes> vals;
    for (int j = 0; j < kNodes; ++j) {
        double th = 2.0 * M_PI * j / kNodes;
        Cplx x1(kRadius * std::cos(th), kRadius * std::sin(th));
        vals[j] = discriminant(F_slice(cfg, v, x1));
    }
    std::vector<Cplx> co(kNodes);
    double vmax = 0.0;
    for (int k = 0; k < kNodes; ++k) {
        Cplx acc(0.0, 0.0);
        for (int j = 0; j < kNodes; ++j) {
            double th = -2.0 * M_PI * j * k / kNodes;
            acc += vals[j] * Cplx(std::cos(th), std::sin(th));
        }
        co[k] = acc / (double(kNodes) * std::pow(kRadius, k));
        vmax = std::max(vmax, std::abs(co[k]));
    }
    for (int k = 13; k < kNodes; ++k)
        if (std::abs(co[k]) > 1e-7 * vmax)
            throw DegreeViolation("G_poly: coefficient of degree " + std::to_string(k) +
                                  " fails to vanish");
    co.resize(13);
    return UniPoly(std::move(co));
}

Cplx Q_value(const PencilConfig& cfg, Cplx v) { return discriminant(G_poly(cfg, v)); }

namespace {

using CplxL = std::complex<long double>;

// Res_{x2}(F, dF/dx2) at a single x1, evaluated from the 7x7 Sylvester matrix
// in long double; *deriv gets d/dx1 via det' = det * tr(S^-1 S').
CplxL slice_resultant_ld(const PencilConfig& cfg, Cplx v, CplxL x1, CplxL* deriv) {
    const long double m = (long double)(cfg.c1.num * cfg.c1.num * cfg.c1.num) /
                          (long double)(cfg.c1.den * cfg.c1.den * cfg.c1.den);
    const long double b = (long double)(cfg.c2.num * cfg.c2.num * cfg.c2.num) /
                          (long double)(cfg.c2.den * cfg.c2.den * cfg.c2.den);
    const long double b2 = b * b, b3 = b2 * b, b4 = b3 * b;
    CplxL w = m * x1 + CplxL(v.real(), v.imag());
    CplxL w2 = w * w, w3 = w2 * w, x3 = x1 * x1 * x1;
    // quartic p in x2 and its x2-derivative q, plus their x1-derivatives
    CplxL p[5] = {w2 * w2 + x3 * x1 + 1.0L, 4.0L * b * w3, 6.0L * b2 * w2, 4.0L * b3 * w,
                  CplxL(b4 + 1.0L)};
    CplxL dp[5] = {4.0L * w3 * m + 4.0L * x3, 12.0L * b * w2 * m, 12.0L * b2 * w * m,
                   CplxL(4.0L * b3 * m), CplxL(0.0L)};
    CplxL q[4] = {p[1], 2.0L * p[2], 3.0L * p[3], 4.0L * p[4]};
    CplxL dq[4] = {dp[1], 2.0L * dp[2], 3.0L * dp[3], 4.0L * dp[4]};
    CplxL S[7][7] = {}, dS[7][7] = {};
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 5; ++k) S[r][r + k] = p[4 - k], dS[r][r + k] = dp[4 - k];
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k) S[3 + r][r + k] = q[3 - k], dS[3 + r][r + k] = dq[3 - k];
    // LU with partial pivoting
    int piv[7];
    CplxL det = 1.0L;
    for (int c = 0; c < 7; ++c) {
        int best = c;
        for (int r = c + 1; r < 7; ++r)
            if (std::abs(S[r][c]) > std::abs(S[best][c])) best = r;
        piv[c] = best;
        if (best != c) {
            for (int k = 0; k < 7; ++k) std::swap(S[c][k], S[best][k]);
            det = -det;
        }
        det *= S[c][c];
        if (S[c][c] == CplxL(0.0L)) return det;
        for (int r = c + 1; r < 7; ++r) {
            CplxL f = S[r][c] / S[c][c];
            S[r][c] = f;
            for (int k = c + 1; k < 7; ++k) S[r][k] -= f * S[c][k];
        }
    }
    if (deriv) {
        CplxL tr = 0.0L;
        for (int col = 0; col < 7; ++col) {
            CplxL y[7];
            for (int r = 0; r < 7; ++r) y[r] = dS[r][col];
            for (int c = 0; c < 7; ++c) std::swap(y[c], y[piv[c]]);
            for (int c = 0; c < 7; ++c)
                for (int r = c + 1; r < 7; ++r) y[r] -= S[r][c] * y[c];
            for (int r = 6; r >= 0; --r) {
                for (int k = r + 1; k < 7; ++k) y[r] -= S[r][k] * y[k];
                y[r] /= S[r][r];
            }
            tr += y[col];
        }
        *deriv = det * tr;
    }
    return det;
}

}  // namespace

Cplx refine_branch_root(const PencilConfig& cfg, Cplx v, Cplx z0) {
    CplxL z(z0.real(), z0.imag());
    CplxL d = 0.0L;
    long double prev_f = std::numeric_limits<long double>::infinity();
    for (int it = 0; it < 60; ++it) {
        // The derivative solve costs ~3x the determinant; keep it frozen while
        // the residual is still dropping and only recompute when progress stalls.
        bool want_d = (it == 0);
        CplxL f = slice_resultant_ld(cfg, v, z, want_d ? &d : nullptr);
        long double af = std::abs(f);
        if (!want_d && af > 0.5L * prev_f) {
            f = slice_resultant_ld(cfg, v, z, &d);
            af = std::abs(f);
        }
        prev_f = af;
        if (std::abs(d) == 0.0L) throw DerivativeVanishes("branch-root refinement stalled");
        CplxL step = f / d;
        z -= step;
        if (std::abs(step) < 1e-16L * std::max(1.0L, std::abs(z))) break;
    }
    Cplx out((double)z.real(), (double)z.imag());
    if (std::abs(out - z0) > 1e-2)
        throw NonConvergence("branch-root refinement left the starting basin");
    return out;
}

namespace {

// All roots of G^v inside |x1 - c| < 0.45 rho. The slice resultant is a
// polynomial in x1 of degree below 32, so 32 Cauchy samples give its exact
// Taylor coefficients at c (up to long-double rounding).
std::vector<Cplx> local_cluster_roots(const PencilConfig& cfg, Cplx v, Cplx c, double rho) {
    constexpr int kN = 32;
    std::array<CplxL, kN> vals;
    for (int j = 0; j < kN; ++j) {
        long double th = 2.0L * M_PIl * j / kN;
        vals[j] = slice_resultant_ld(cfg, v, CplxL(c.real(), c.imag()) +
                                                 CplxL(rho * cosl(th), rho * sinl(th)),
                                     nullptr);
    }
    std::array<CplxL, kN> co;
    long double vmax = 0.0L;
    for (int k = 0; k < kN; ++k) {
        CplxL acc = 0.0L;
        for (int j = 0; j < kN; ++j) {
            long double th = -2.0L * M_PIl * j * k / kN;
            acc += vals[j] * CplxL(cosl(th), sinl(th));
        }
        co[k] = acc / (long double)kN;  // coefficient of ((x1 - c)/rho)^k
        vmax = std::max(vmax, (long double)std::abs(co[k]));
    }
    std::vector<Cplx> scaled(kN);
    for (int k = 0; k < kN; ++k)
        scaled[k] = Cplx((double)(co[k].real() / vmax), (double)(co[k].imag() / vmax));
    std::vector<Cplx> out;
    for (Cplx s : poly_roots(UniPoly(std::move(scaled))))
        if (std::abs(s) < 0.45) out.push_back(c + rho * s);
    return out;
}

}  // namespace

void refine_branch_roots(const PencilConfig& cfg, Cplx v, std::vector<Cplx>& roots,
                         double cluster_radius) {
    const int n = int(roots.size());
    std::vector<bool> handled(n, false);
    for (int i = 0; i < n; ++i) {
        if (handled[i]) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j)
            if (j != i) nearest = std::min(nearest, std::abs(roots[j] - roots[i]));
        if (nearest > 3.0 * cluster_radius) {
            roots[i] = refine_branch_root(cfg, v, roots[i]);
            handled[i] = true;
            continue;
        }
        // grow a group around i until every outside root clears 1.8 R, so the
        // sampling disk of radius 2.5 R separates members (|s| <= 0.4) from
        // the rest (|s| > 0.72)
        std::vector<int> group{i};
        Cplx c = roots[i];
        double R = cluster_radius;
        for (int pass = 0; pass < n + 2; ++pass) {
            std::vector<int> g2;
            for (int j = 0; j < n; ++j)
                if (std::abs(roots[j] - c) <= R) g2.push_back(j);
            c = 0.0;
            for (int j : g2) c += roots[j];
            c /= double(g2.size());
            double spread = 0.0, intruder = 0.0;
            for (int j : g2) spread = std::max(spread, std::abs(roots[j] - c));
            for (int j = 0; j < n; ++j) {
                if (std::abs(roots[j] - c) <= R) continue;
                double d = std::abs(roots[j] - c);
                if (d <= 1.8 * R) intruder = std::max(intruder, d);
            }
            double Rnew = std::max({R, 2.0 * spread + cluster_radius, intruder + cluster_radius});
            if (g2.size() == group.size() && Rnew == R) {
                group = g2;
                break;
            }
            group = g2;
            R = Rnew;
        }
        std::vector<Cplx> found = local_cluster_roots(cfg, v, c, 2.5 * R);
        if (found.size() != group.size())
            throw NonConvergence("cluster refinement found " + std::to_string(found.size()) +
                                 " roots where " + std::to_string(group.size()) +
                                 " were expected");
        std::vector<bool> taken(found.size(), false);
        for (int j : group) {
            int best = -1;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < found.size(); ++k)
                if (!taken[k] && std::abs(found[k] - roots[j]) < bd) {
                    bd = std::abs(found[k] - roots[j]);
                    best = int(k);
                }
            taken[best] = true;
            roots[j] = found[best];
            handled[j] = true;
        }
    }
}

int katz_dual_degree(int d) {
    if (d < 2) throw std::invalid_argument("katz_dual_degree: d >= 2");
    // Coefficient of h^2 in (1+h)^2 (1+dh)^{-1}, times int_X h^2 = d.
    // Series: (1 + 2h + h^2)(1 - dh + d^2 h^2 - ...).
    std::int64_t s0 = 1, s1 = 2 - d, s2 = 1 - 2 * std::int64_t(d) + std::int64_t(d) * d;
    (void)s0;
    (void)s1;
    return int(d * s2);
}

std::array<Cplx, 4> base_fiber(const PencilConfig& cfg) {
    double rho = std::pow(1.0 + cfg.c2_12(), -0.25);
    std::array<Cplx, 4> s;
    for (int k = 1; k <= 4; ++k) {
        double th = (2 * k - 1) * M_PI / 4.0;
        s[k - 1] = Cplx(rho * std::cos(th), rho * std::sin(th));
    }
    return s;
}

SetupReport verify_setup(const PencilConfig& cfg) {
    SetupReport r;
    r.transversal = transversality_check(cfg.c1, cfg.c2);
    r.lemma41_ok = lemma41_check(cfg);
    r.katz_degree = katz_dual_degree(4);
    r.q_at_base = Q_value(cfg, Cplx(0.0, 0.0));
    r.assumption_value = cfg.assumption_value();
    return r;
}

}  // namespace fermat
