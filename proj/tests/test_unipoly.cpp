#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fermat/unipoly.hpp"

using namespace fermat;

namespace {

UniPoly from_roots(const std::vector<Cplx>& roots, Cplx lead = Cplx(1.0, 0.0)) {
    UniPoly p(std::vector<Cplx>{lead});
    for (Cplx r : roots) p = p * UniPoly(std::vector<Cplx>{-r, Cplx(1.0, 0.0)});
    return p;
}

// Independent oracle: res(p, q) = lead(p)^deg(q) * prod q(root_i(p)), with
// the roots of p supplied exactly by the caller.
Cplx resultant_oracle(const std::vector<Cplx>& roots_p, Cplx lead_p, const UniPoly& q) {
    Cplx acc = std::pow(lead_p, q.degree());
    for (Cplx r : roots_p) acc *= poly_eval(q, r);
    return acc;
}

std::mt19937_64 rng(20240817);
Cplx rnd_c(double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return Cplx(u(rng), u(rng));
}

bool matched_multisets(std::vector<Cplx> a, std::vector<Cplx> b, double tol) {
    if (a.size() != b.size()) return false;
    for (Cplx x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](Cplx p, Cplx q) {
            return std::abs(p - x) < std::abs(q - x);
        });
        if (it == b.end() || std::abs(*it - x) > tol) return false;
        b.erase(it);
    }
    return true;
}

}  // namespace

TEST_CASE("poly_eval basics") {
    UniPoly p({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});  // x^4 + 1
    Cplx z = std::polar(1.0, M_PI / 4.0);
    CHECK(std::abs(poly_eval(p, z)) < 1e-12);

    UniPoly c({Cplx(1, 0)});
    CHECK(poly_eval(c, Cplx(5, 2)) == Cplx(1, 0));

    UniPoly sq({Cplx(1, 0), Cplx(-2, 0), Cplx(1, 0)});  // (x-1)^2
    CHECK(std::abs(poly_eval(sq, Cplx(1, 0))) == 0.0);
}

TEST_CASE("poly_roots: quartic roots of unity shift") {
    UniPoly p({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});
    auto roots = poly_roots(p, 1e-12);
    std::vector<Cplx> expect;
    for (int k = 1; k <= 4; ++k) expect.push_back(std::polar(1.0, (2 * k - 1) * M_PI / 4.0));
    CHECK(matched_multisets(roots, expect, 1e-9));
}

TEST_CASE("poly_roots: base-fiber quartic closed form") {
    double c2_12 = std::pow(0.75, 12);
    UniPoly p({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(c2_12 + 1.0, 0)});
    auto roots = poly_roots(p, 1e-12);
    double want = std::pow(1.0 + c2_12, -0.25);
    for (Cplx r : roots) CHECK(std::abs(std::abs(r) - want) < 1e-10);
}

TEST_CASE("poly_roots: triple root clusters within cbrt(tol)") {
    UniPoly p = from_roots({Cplx(1, 0), Cplx(1, 0), Cplx(1, 0)});
    auto roots = poly_roots(p, 1e-12);
    double radius = std::pow(1e-12 * 10.0, 1.0 / 3.0);
    for (Cplx r : roots) CHECK(std::abs(r - Cplx(1, 0)) < radius);
}

TEST_CASE("poly_roots: residual property on random monic polys up to degree 12") {
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> dd(2, 12);
        int n = dd(rng);
        std::vector<Cplx> co(n + 1);
        for (int k = 0; k < n; ++k) co[k] = rnd_c(2.0);
        co[n] = Cplx(1, 0);
        UniPoly p(co);
        for (Cplx r : poly_roots(p, 1e-12))
            CHECK(std::abs(poly_eval(p, r)) < 1e-9 * eval_scale(p, r));
    }
}

TEST_CASE("newton_refine") {
    UniPoly p({Cplx(1, 0), Cplx(0, 0), Cplx(1, 0)});  // x^2 + 1
    CHECK(std::abs(newton_refine(p, Cplx(0, 0.9)) - Cplx(0, 1)) < 1e-13);

    UniPoly q({Cplx(-2, 0), Cplx(0, 0), Cplx(1, 0)});  // x^2 - 2
    CHECK(std::abs(newton_refine(q, Cplx(1.4, 0)) - Cplx(std::sqrt(2.0), 0)) < 1e-14);

    UniPoly dbl({Cplx(1, 0), Cplx(-2, 0), Cplx(1, 0)});  // (x-1)^2
    CHECK_THROWS_AS(newton_refine(dbl, Cplx(1.001, 0)), DerivativeVanishes);
}

TEST_CASE("resultant: convention and linear pair") {
    Cplx a(1.5, 0.25), b(-0.5, 2.0);
    UniPoly p({-a, Cplx(1, 0)}), q({-b, Cplx(1, 0)});
    Cplx got = resultant(p, q);
    Cplx oracle = resultant_oracle({a}, Cplx(1, 0), q);  // = a - b
    CHECK(std::abs(got - oracle) < 1e-12);
}

TEST_CASE("resultant: shared root gives zero") {
    UniPoly p = from_roots({Cplx(2, 0), Cplx(1, 1)});
    UniPoly q = from_roots({Cplx(2, 0), Cplx(-3, 0.5)});
    CHECK(std::abs(resultant(p, q)) < 1e-9);
}

TEST_CASE("resultant: x^4+1 against derivative matches root-product oracle") {
    UniPoly p({Cplx(1, 0), Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});
    std::vector<Cplx> roots;
    for (int k = 1; k <= 4; ++k) roots.push_back(std::polar(1.0, (2 * k - 1) * M_PI / 4.0));
    Cplx oracle = resultant_oracle(roots, p.lead(), p.derivative());
    Cplx got = resultant(p, p.derivative());
    CHECK(std::abs(got - oracle) < 1e-9 * std::abs(oracle));
}

TEST_CASE("resultant multiplicativity on random inputs") {
    for (int trial = 0; trial < 12; ++trial) {
        std::uniform_int_distribution<int> dd(1, 4);
        auto rp = [&](int n) {
            std::vector<Cplx> co(n + 1);
            for (int k = 0; k <= n; ++k) co[k] = rnd_c();
            co[n] += Cplx(2.0, 0);  // keep the lead away from zero
            return UniPoly(co);
        };
        UniPoly p = rp(dd(rng)), q = rp(dd(rng)), r = rp(dd(rng));
        Cplx lhs = resultant(p * q, r);
        Cplx rhs = resultant(p, r) * resultant(q, r);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * (std::abs(rhs) + 1.0));
    }
}

TEST_CASE("discriminant: quadratic closed form and repeated roots") {
    Cplx b(1.25, -0.5), c(0.75, 2.0);
    UniPoly p({c, b, Cplx(1, 0)});
    CHECK(std::abs(discriminant(p) - (b * b - 4.0 * c)) < 1e-12);

    UniPoly rep = from_roots({Cplx(1, 0), Cplx(1, 0), Cplx(2, 0)});
    CHECK(std::abs(discriminant(rep)) < 1e-10);
}

TEST_CASE("discriminant matches root-difference-product oracle") {
    for (int trial = 0; trial < 12; ++trial) {
        std::uniform_int_distribution<int> dd(2, 6);
        int n = dd(rng);
        std::vector<Cplx> roots(n);
        for (auto& r : roots) r = rnd_c(1.5);
        Cplx lead = rnd_c() + Cplx(2.0, 0);
        UniPoly p = from_roots(roots, lead);
        Cplx oracle = std::pow(lead, 2 * n - 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Cplx d = roots[i] - roots[j];
                oracle *= d * d;
            }
        Cplx got = discriminant(p);
        CHECK(std::abs(got - oracle) <= 1e-8 * (std::abs(oracle) + 1e-12));
    }
}

TEST_CASE("interpolate: exact recovery cases") {
    // x^2 + 1 at 5 nodes, bound 2.
    std::vector<std::pair<Cplx, Cplx>> s;
    for (int k = 0; k < 5; ++k) {
        Cplx z(0.3 * k - 0.6, 0.1 * k);
        s.push_back({z, z * z + 1.0});
    }
    UniPoly fit = interpolate(s, 2);
    CHECK(std::abs(fit.coeff(0) - Cplx(1, 0)) < 1e-10);
    CHECK(std::abs(fit.coeff(1)) < 1e-10);
    CHECK(std::abs(fit.coeff(2) - Cplx(1, 0)) < 1e-10);

    // Degree 12 from 25 scaled roots of unity.
    std::vector<Cplx> co(13);
    for (auto& c : co) c = rnd_c(2.0);
    co[12] += Cplx(1.0, 0);
    UniPoly p(co);
    std::vector<std::pair<Cplx, Cplx>> s2;
    for (int j = 0; j < 25; ++j) {
        Cplx z = std::polar(1.3, 2.0 * M_PI * j / 25.0);
        s2.push_back({z, poly_eval(p, z)});
    }
    UniPoly rec = interpolate(s2, 12);
    for (int k = 0; k <= 12; ++k)
        CHECK(std::abs(rec.coeff(k) - p.coeff(k)) < 1e-10 * p.max_coeff_modulus());

    // Constant samples, bound 0.
    std::vector<std::pair<Cplx, Cplx>> s3{{Cplx(0, 0), Cplx(3, 1)}, {Cplx(1, 0), Cplx(3, 1)}};
    UniPoly cfit = interpolate(s3, 0);
    CHECK(std::abs(cfit.coeff(0) - Cplx(3, 1)) < 1e-12);
}

TEST_CASE("interpolate error paths") {
    std::vector<std::pair<Cplx, Cplx>> coincident{
        {Cplx(1, 0), Cplx(0, 0)}, {Cplx(1, 0), Cplx(1, 0)}, {Cplx(2, 0), Cplx(0, 0)}};
    CHECK_THROWS_AS(interpolate(coincident, 1), IllConditioned);

    // Degree bound too small for the data.
    std::vector<std::pair<Cplx, Cplx>> cubic;
    for (int k = 0; k < 6; ++k) {
        Cplx z(double(k), 0.0);
        cubic.push_back({z, z * z * z});
    }
    CHECK_THROWS_AS(interpolate(cubic, 1), ResidualTooLarge);
}

TEST_CASE("interpolate o sample = identity within degree bound") {
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<int> dd(0, 6);
        int n = dd(rng);
        std::vector<Cplx> co(n + 1);
        for (auto& c : co) c = rnd_c();
        co[n] += Cplx(1.5, 0);
        UniPoly p(co);
        std::vector<std::pair<Cplx, Cplx>> s;
        for (int j = 0; j < n + 5; ++j) {
            Cplx z = std::polar(1.1, 2.0 * M_PI * j / (n + 5));
            s.push_back({z, poly_eval(p, z)});
        }
        UniPoly rec = interpolate(s, n);
        for (int k = 0; k <= n; ++k)
            CHECK(std::abs(rec.coeff(k) - p.coeff(k)) < 1e-10 * (p.max_coeff_modulus() + 1.0));
    }
}
