#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fermat/config.hpp"
#include "fermat/surface.hpp"

using namespace fermat;

namespace {
const PencilConfig kPaper{};

GeneratorTuple random_tuple(std::mt19937_64& rng, int n) {
    // Abstract tuple with random single-letter words and random transposition
    // images; only the word algebra is exercised, not the numeric cover.
    GeneratorTuple t;
    std::uniform_int_distribution<int> sheet(0, 3);
    for (int k = 1; k <= n; ++k) {
        t.words.push_back({k});
        int a = sheet(rng), b = sheet(rng);
        while (b == a) b = sheet(rng);
        CoverPerm p = CoverPerm::transposition(a, b);
        t.perms.push_back(p);
        t.letter_perms.push_back(p);
    }
    return t;
}

bool same_words(const GeneratorTuple& a, const GeneratorTuple& b) {
    if (a.words.size() != b.words.size()) return false;
    for (size_t k = 0; k < a.words.size(); ++k) {
        if (!(a.words[k] == b.words[k])) return false;
        if (!(a.perms[k] == b.perms[k])) return false;
    }
    return true;
}
}  // namespace

TEST_CASE("free words: reduction, multiplication, inverse") {
    CHECK(word_reduce({1, -1}) == FreeWord{});
    CHECK(word_reduce({2, 1, -1, -2, 3}) == FreeWord{3});
    CHECK(word_mul({1, 2}, {-2, 3}) == FreeWord{1, 3});
    CHECK(word_inverse({1, 2, -3}) == FreeWord{3, -2, -1});
    FreeWord w{1, -2, 3, 3};
    CHECK(word_mul(w, word_inverse(w)) == FreeWord{});
}

TEST_CASE("hurwitz_move: move then inverse is the identity on random tuples") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        GeneratorTuple t = random_tuple(rng, 6);
        for (int p = 1; p <= 5; ++p) {
            GeneratorTuple u = hurwitz_move(hurwitz_move(t, p, +1), p, -1);
            CHECK(same_words(u, t));
        }
    }
}

TEST_CASE("hurwitz_move: ordered product word is invariant") {
    std::mt19937_64 rng(9);
    GeneratorTuple t = random_tuple(rng, 8);
    FreeWord prod = t.product_word();
    std::uniform_int_distribution<int> pos(1, 7), sgn(0, 1);
    for (int k = 0; k < 50; ++k) t = hurwitz_move(t, pos(rng), sgn(rng) ? +1 : -1);
    CHECK(t.product_word() == prod);
}

TEST_CASE("hurwitz_move: braid relation on adjacent positions") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        GeneratorTuple t = random_tuple(rng, 5);
        for (int p = 1; p <= 3; ++p) {
            GeneratorTuple lhs = hurwitz_move(hurwitz_move(hurwitz_move(t, p, +1), p + 1, +1), p, +1);
            GeneratorTuple rhs = hurwitz_move(hurwitz_move(hurwitz_move(t, p + 1, +1), p, +1), p + 1, +1);
            CHECK(same_words(lhs, rhs));
        }
    }
}

TEST_CASE("transport: empty word fixes the tuple; word then inverse word returns") {
    std::mt19937_64 rng(21);
    GeneratorTuple t = random_tuple(rng, 6);
    CHECK(same_words(transport(t, {}), t));
    std::vector<BraidLetter> w{{2, +1}, {4, -1}, {1, +1}, {2, +1}};
    std::vector<BraidLetter> winv;
    for (auto it = w.rbegin(); it != w.rend(); ++it) winv.push_back({it->position, -it->sign});
    CHECK(same_words(transport(transport(t, w), winv), t));
}

TEST_CASE("build_ribbon_surface: 2-sheet double branch cover is a sphere") {
    std::vector<Cplx> punctures{Cplx(-1, 1), Cplx(1, 1)};
    CoverPerm swap = CoverPerm::transposition(0, 1);
    RibbonSurface s =
        build_ribbon_surface(punctures, Cplx(0, -1), {swap, swap}, CoverPerm::identity(), 2);
    CHECK(s.V == 6);
    CHECK(s.E == 6);
    CHECK(s.F == 2);
    CHECK(s.euler == 2);
    CHECK(s.genus == 0);
    CHECK(s.h1_rank == 0);
}

TEST_CASE("build_ribbon_surface: 2-sheet 4-branch-point cover is a torus") {
    std::vector<Cplx> punctures{Cplx(-2, 1), Cplx(-1, 1), Cplx(1, 1), Cplx(2, 1)};
    CoverPerm swap = CoverPerm::transposition(0, 1);
    RibbonSurface s = build_ribbon_surface(punctures, Cplx(0, -1), {swap, swap, swap, swap},
                                           CoverPerm::identity(), 2);
    CHECK(s.euler == 0);
    CHECK(s.genus == 1);
    CHECK(s.h1_rank == 2);
    // Genus-1 symplectic form in some basis: antisymmetric, det 1, and the
    // single off-diagonal pair is +-1.
    // (The rank-6 container embeds the rank-2 form in its leading block.)
    CHECK(s.form.antisymmetric());
    CHECK(s.form.matrix[0][1] * s.form.matrix[1][0] == -1);
}

TEST_CASE("build_ribbon_surface: all-identity permutations are not transitive") {
    std::vector<Cplx> punctures{Cplx(-1, 1), Cplx(1, 1)};
    CHECK_THROWS_AS(build_ribbon_surface(punctures, Cplx(0, -1),
                                         {CoverPerm::identity(), CoverPerm::identity()},
                                         CoverPerm::identity(), 2),
                    NotTransitive);
}

TEST_CASE("paper cover: genus-3 surface with a unimodular antisymmetric form") {
    RunConfig cfg = RunConfig::defaults();
    auto a = branch_points_a(kPaper);
    GeneratorTuple basis = ordered_basis(kPaper, Cplx(0, 0), a, cfg.basis_basepoint);
    REQUIRE(basis.words.size() == 12);
    for (const auto& p : basis.perms) CHECK(p.is_transposition());
    CHECK(basis.product_perm() == CoverPerm::identity());

    // The slot values are conjugates of the chi-table entries by per-slot
    // basis-change elements; what survives the change of basepoint is the
    // conjugacy class (all transpositions, checked above) and transitivity.
    std::array<int, 4> comp{0, 1, 2, 3};
    auto find = [&](int x) {
        while (comp[std::size_t(x)] != x) x = comp[std::size_t(x)];
        return x;
    };
    for (const auto& p : basis.perms)
        for (int k = 0; k < 4; ++k)
            if (p(k) != k) comp[std::size_t(find(k))] = find(p(k));
    for (int k = 1; k < 4; ++k) CHECK(find(k) == find(0));

    RibbonSurface s = build_ribbon_surface(a, cfg.basis_basepoint, basis.letter_perms,
                                           CoverPerm::identity(), 4);
    CHECK(s.V == 44);
    CHECK(s.E == 52);
    CHECK(s.F == 4);
    CHECK(s.euler == -4);
    CHECK(s.genus == 3);
    CHECK(s.h1_rank == 6);
    CHECK(s.form.antisymmetric());
    CHECK(s.form.det() == 1);
    // Self-pairing vanishes and the pairing is bilinear.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> c(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        HomologyCycle x, y, z, xy;
        for (int k = 0; k < 6; ++k) {
            x.coords[k] = c(rng);
            y.coords[k] = c(rng);
            z.coords[k] = c(rng);
            xy.coords[k] = x.coords[k] + y.coords[k];
        }
        CHECK(s.form.pair(x, x) == 0);
        CHECK(s.form.pair(xy, z) == s.form.pair(x, z) + s.form.pair(y, z));
        CHECK(s.form.pair(x, y) == -s.form.pair(y, x));
    }
}

TEST_CASE("lift_word_to_cycle: null classes and closedness") {
    RunConfig cfg = RunConfig::defaults();
    auto a = branch_points_a(kPaper);
    GeneratorTuple basis = ordered_basis(kPaper, Cplx(0, 0), a, cfg.basis_basepoint);
    RibbonSurface s = build_ribbon_surface(a, cfg.basis_basepoint, basis.letter_perms,
                                           CoverPerm::identity(), 4);

    // h_k^2 bounds a disk around the ramification point.
    for (int k = 1; k <= 12; ++k) {
        int sheet = -1;
        for (int q = 0; q < 4; ++q)
            if (basis.letter_perms[k - 1](q) != q) sheet = q;
        REQUIRE(sheet >= 0);
        CHECK(lift_word_to_cycle(s, {k, k}, sheet).is_zero());
    }

    // The ordered product of all letters bounds the lifted outer-disk face.
    FreeWord all;
    for (int k = 1; k <= 12; ++k) all.push_back(k);
    for (int sheet = 0; sheet < 4; ++sheet) CHECK(lift_word_to_cycle(s, all, sheet).is_zero());

    // Disjoint supports, start sheet outside both: the null detours vanish.
    for (int j = 0; j < 12; ++j)
        for (int k = 0; k < 12; ++k) {
            if (j == k) continue;
            const CoverPerm& pj = basis.letter_perms[j];
            const CoverPerm& pk = basis.letter_perms[k];
            bool disjoint = true;
            int outside = -1;
            for (int q = 0; q < 4; ++q) {
                if (pj(q) != q && pk(q) != q) disjoint = false;
                if (pj(q) == q && pk(q) == q) outside = q;
            }
            if (!disjoint || outside < 0) continue;
            CHECK(lift_word_to_cycle(s, {j + 1, k + 1}, outside).is_zero());
        }

    // A word whose permutation moves the start sheet does not close.
    int moved = -1;
    for (int q = 0; q < 4; ++q)
        if (basis.letter_perms[0](q) != q) moved = q;
    CHECK_THROWS_AS(lift_word_to_cycle(s, {1}, moved), NotClosed);
}

TEST_CASE("vanishing lasso and cycle class for path 1") {
    RunConfig cfg = RunConfig::defaults();
    auto a = branch_points_a(kPaper);
    auto mu = default_mu_paths(kPaper);
    auto opts = cfg.track_options();
    opts.record_positions = false;
    RootTrack tr =
        track_roots([&](Cplx v) { return G_poly(kPaper, v); }, a, mu[0], opts);
    REQUIRE(tr.collided);
    REQUIRE(tr.delta == 3);
    REQUIRE(tr.epsilon == 6);

    GeneratorTuple basis = ordered_basis(kPaper, Cplx(0, 0), a, cfg.basis_basepoint);
    VanishingLasso lasso = vanishing_lasso(basis, tr);
    CHECK(lasso.tau.is_transposition());
    CHECK(lasso.sheet_a != lasso.sheet_b);
    CHECK(lasso.tau(lasso.sheet_a) == lasso.sheet_b);
    // chi of the lasso word is the product of two equal transpositions.
    CHECK(basis.eval(lasso.word) == CoverPerm::identity());

    RibbonSurface s = build_ribbon_surface(a, cfg.basis_basepoint, basis.letter_perms,
                                           CoverPerm::identity(), 4);
    HomologyCycle c = vanishing_cycle_class(s, lasso);
    CHECK_FALSE(c.is_zero());
    CHECK(c.primitive());
    CHECK(s.form.pair(c, c) == 0);
}
