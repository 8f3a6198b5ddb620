#include "fermat/symplectic.hpp"

#include <cstdlib>
#include <numeric>
#include <queue>
#include <unordered_set>

namespace fermat {

namespace {

std::int64_t checked_i64(__int128 v, const char* where) {
    if (v > __int128(INT64_MAX) || v < __int128(INT64_MIN))
        throw std::overflow_error(std::string("64-bit overflow in ") + where);
    return std::int64_t(v);
}

// (M^T J M)[i][j] computed in 128-bit, compared with J exactly.
bool preserves_form(const std::array<std::array<std::int64_t, 6>, 6>& m,
                    const IntersectionForm& J) {
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            __int128 acc = 0;
            for (int k = 0; k < 6; ++k) {
                __int128 row = 0;
                for (int l = 0; l < 6; ++l) row += __int128(J.matrix[k][l]) * m[l][j];
                acc += __int128(m[k][i]) * row;
            }
            if (acc != __int128(J.matrix[i][j])) return false;
        }
    return true;
}

}  // namespace

SpMatrix SpMatrix::identity_for(const IntersectionForm& J) {
    std::array<std::array<std::int64_t, 6>, 6> m{};
    for (int i = 0; i < 6; ++i) m[i][i] = 1;
    return checked(m, J);
}

SpMatrix SpMatrix::checked(const std::array<std::array<std::int64_t, 6>, 6>& m,
                           const IntersectionForm& J) {
    if (!preserves_form(m, J)) throw FormViolation("matrix does not preserve the form");
    SpMatrix r;
    r.entries = m;
    return r;
}

HomologyCycle SpMatrix::apply(const HomologyCycle& x) const {
    HomologyCycle y;
    for (int i = 0; i < 6; ++i) {
        __int128 acc = 0;
        for (int j = 0; j < 6; ++j) acc += __int128(entries[i][j]) * x.coords[j];
        y.coords[i] = checked_i64(acc, "SpMatrix::apply");
    }
    return y;
}

SpMatrix SpMatrix::mul(const SpMatrix& rhs, const IntersectionForm& J) const {
    std::array<std::array<std::int64_t, 6>, 6> m{};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            __int128 acc = 0;
            for (int k = 0; k < 6; ++k) acc += __int128(entries[i][k]) * rhs.entries[k][j];
            m[i][j] = checked_i64(acc, "SpMatrix::mul");
        }
    return checked(m, J);
}

bool SpMatrix::is_identity() const {
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (entries[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

SpMatrix transvection(const HomologyCycle& c, const IntersectionForm& J, int sign) {
    std::array<std::array<std::int64_t, 6>, 6> m{};
    for (int j = 0; j < 6; ++j) {
        __int128 pairing = 0;  // <e_j, c>
        for (int k = 0; k < 6; ++k) pairing += __int128(J.matrix[j][k]) * c.coords[k];
        for (int i = 0; i < 6; ++i) {
            __int128 v = (i == j ? 1 : 0) + __int128(sign) * pairing * c.coords[i];
            m[i][j] = checked_i64(v, "transvection");
        }
    }
    return SpMatrix::checked(m, J);
}

RelationReport verify_relation(const std::vector<HomologyCycle>& classes,
                               const IntersectionForm& J) {
    RelationReport rep;
    for (int sign : {+1, -1}) {
        SpMatrix prod = SpMatrix::identity_for(J);
        std::vector<std::int64_t> norms;
        norms.reserve(classes.size());
        // T_k ... T_1: left-multiply by each successive transvection.
        for (const HomologyCycle& c : classes) {
            prod = transvection(c, J, sign).mul(prod, J);
            std::int64_t mx = 0;
            for (const auto& row : prod.entries)
                for (std::int64_t e : row) mx = std::max(mx, std::abs(e));
            norms.push_back(mx);
        }
        if (prod.is_identity()) {
            rep.product_is_identity = true;
            rep.sign_convention_used = sign;
            rep.partial_norms = std::move(norms);
            return rep;
        }
        if (sign == +1) rep.partial_norms = std::move(norms);  // keep first-try diagnostic
    }
    throw NeverCloses("transvection product is not the identity under either sign");
}

namespace {

// 6x6 matrix over F_2 packed as six 6-bit rows in a 64-bit word.
using Mat2 = std::uint64_t;

constexpr Mat2 kIdentity2 = []() {
    Mat2 m = 0;
    for (int i = 0; i < 6; ++i) m |= Mat2(1) << (6 * i + i);
    return m;
}();

int bit(Mat2 m, int i, int j) { return int(m >> (6 * i + j)) & 1; }

Mat2 mul2(Mat2 a, Mat2 b) {
    Mat2 r = 0;
    for (int i = 0; i < 6; ++i) {
        std::uint64_t row = (a >> (6 * i)) & 0x3f;
        std::uint64_t out = 0;
        for (int k = 0; k < 6; ++k)
            if ((row >> k) & 1) out ^= (b >> (6 * k)) & 0x3f;
        r |= out << (6 * i);
    }
    return r;
}

}  // namespace

std::int64_t generation_mod2(const std::vector<HomologyCycle>& classes, const IntersectionForm& J,
                             std::size_t guard) {
    std::vector<Mat2> gens;
    for (const HomologyCycle& c : classes) {
        SpMatrix t = transvection(c, J, +1);
        Mat2 m = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (t.entries[i][j] & 1) m |= Mat2(1) << (6 * i + j);
        gens.push_back(m);
    }
    (void)bit;
    std::unordered_set<Mat2> seen{kIdentity2};
    std::queue<Mat2> work;
    work.push(kIdentity2);
    while (!work.empty()) {
        Mat2 g = work.front();
        work.pop();
        for (Mat2 t : gens) {
            Mat2 h = mul2(t, g);
            if (seen.insert(h).second) {
                if (seen.size() > guard)
                    throw ExplosionGuard("mod-2 closure exceeded the element guard");
                work.push(h);
            }
        }
    }
    return std::int64_t(seen.size());
}

bool primitivity(const HomologyCycle& c) {
    std::int64_t g = 0;
    for (std::int64_t x : c.coords) g = std::gcd(g, std::abs(x));
    return g == 1;
}

}  // namespace fermat
