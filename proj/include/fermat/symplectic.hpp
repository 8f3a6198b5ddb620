#ifndef FERMAT_SYMPLECTIC_HPP
#define FERMAT_SYMPLECTIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/surface.hpp"

namespace fermat {

struct FormViolation : std::runtime_error {
    explicit FormViolation(const std::string& what) : std::runtime_error(what) {}
};
struct NeverCloses : std::runtime_error {
    explicit NeverCloses(const std::string& what) : std::runtime_error(what) {}
};
struct ExplosionGuard : std::runtime_error {
    explicit ExplosionGuard(const std::string& what) : std::runtime_error(what) {}
};

/// 6x6 integer matrix preserving a fixed antisymmetric form J: M^T J M = J,
/// checked exactly on construction. Acts on column coordinate vectors.
struct SpMatrix {
    std::array<std::array<std::int64_t, 6>, 6> entries{};

    static SpMatrix identity_for(const IntersectionForm& J);
    /// Validating constructor helper: throws FormViolation unless M^T J M = J.
    static SpMatrix checked(const std::array<std::array<std::int64_t, 6>, 6>& m,
                            const IntersectionForm& J);

    HomologyCycle apply(const HomologyCycle& x) const;
    SpMatrix mul(const SpMatrix& rhs, const IntersectionForm& J) const;  // this * rhs
    bool is_identity() const;
    bool operator==(const SpMatrix& o) const { return entries == o.entries; }
};

/// Picard-Lefschetz transvection x -> x + sign * <x, c> * c with respect to J.
SpMatrix transvection(const HomologyCycle& c, const IntersectionForm& J, int sign);

struct RelationReport {
    bool product_is_identity = false;
    int sign_convention_used = 0;  // +1 or -1; 0 when neither closes
    /// max |entry| of each partial product T_k ... T_1 (diagnostic).
    std::vector<std::int64_t> partial_norms;
};

/// Checks T_36 * T_35 * ... * T_1 = 1 over exact integers, trying the global
/// transvection sign +1 first, then -1. Throws NeverCloses when both fail.
RelationReport verify_relation(const std::vector<HomologyCycle>& classes,
                               const IntersectionForm& J);

/// Order of the subgroup of Sp(6, 2) generated by the mod-2 transvections of
/// the given classes (breadth-first closure). Guards against runaway closure.
std::int64_t generation_mod2(const std::vector<HomologyCycle>& classes, const IntersectionForm& J,
                             std::size_t guard = 2000000);

/// gcd of coordinates = 1.
bool primitivity(const HomologyCycle& c);

}  // namespace fermat

#endif
