#ifndef FERMAT_PENCIL_HPP
#define FERMAT_PENCIL_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "fermat/unipoly.hpp"

namespace fermat {

struct DegenerateConfig : std::runtime_error {
    explicit DegenerateConfig(const std::string& what) : std::runtime_error(what) {}
};
struct DegreeViolation : std::runtime_error {
    explicit DegreeViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Exact rational, only as far as the pencil constants need it.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return double(num) / double(den); }
    Rational pow4() const;
    double abs_pow4() const;
};

/// The two pencil constants and their cached powers. The default (7/8, 3/4)
/// is the configuration all tables refer to.
struct PencilConfig {
    Rational c1{7, 8};
    Rational c2{3, 4};

    double c1_3() const;
    double c1_4() const;
    double c2_3() const;
    double c2_4() const;
    double c2_12() const;
    /// |c1|^4 + |c2|^4, evaluated in exact rational arithmetic.
    double assumption_value() const;
};

struct DualPoint {
    Cplx v;
    int i1 = 0, i2 = 0;  // factor index, 0..2 each
    int label = 0;       // 1..36
};

struct SetupReport {
    bool transversal = false;
    bool lemma41_ok = false;
    int katz_degree = 0;
    Cplx q_at_base{};
    double assumption_value = 0.0;
};

/// omega = exp(2 pi i / 3); omega_pow(k) = omega^k.
Cplx omega_pow(int k);

/// Value of the dual-variety defining product at alpha (homogeneous 4-tuple),
/// using principal cube roots of the coordinates. Vanishes (within tolerance)
/// exactly on tangent hyperplanes; invariant under beta_i -> omega beta_i.
Cplx dual_membership(const std::array<Cplx, 4>& alpha);

/// The 36 intersection points of the pencil line with the dual surface,
/// labelled in the order used by the downstream tables: v_1..v_5 match the
/// published approximations, v_6..v_9 are their diagonal reflections
/// (v_i = Im(v_{10-i}) + sqrt(-1) Re(v_{10-i})), and v_{i+9} = sqrt(-1) v_i.
std::vector<DualPoint> line_dual_points(const PencilConfig& cfg);

/// Both genericity conditions: no factor constant vanishes, and the 36 roots
/// are pairwise distinct.
bool transversality_check(const Rational& c1, const Rational& c2);

/// Closed-form necessary conditions from the tameness lemma plus the numeric
/// discriminant check of the slice over the point at infinity.
bool lemma41_check(const PencilConfig& cfg);

/// F^v_{x1}(x2) = (c1^3 x1 + c2^3 x2 + v)^4 + x1^4 + x2^4 + 1, as a quartic
/// in x2.
UniPoly F_slice(const PencilConfig& cfg, Cplx v, Cplx x1);

/// Branch polynomial G^v(x1) = disc_{x2} F^v_{x1}: sampled on a circle of
/// radius 1.3, interpolated with bound 24, degree-13..24 coefficients checked
/// to vanish, trimmed to exact degree 12.
UniPoly G_poly(const PencilConfig& cfg, Cplx v);

/// Q(v) = disc_{x1} G^v.
Cplx Q_value(const PencilConfig& cfg, Cplx v);

/// Extended-precision Newton polish of a root of G^v, evaluating the slice
/// resultant pointwise in long double. Near the flat clusters of G the
/// interpolated double-precision coefficients carry noise far above the root
/// separation; this refiner is stable there.
Cplx refine_branch_root(const PencilConfig& cfg, Cplx v, Cplx z0);

/// Refines a full set of approximate roots of G^v in place. Isolated roots
/// get the plain extended-precision Newton; roots bunched tighter than the
/// clustering radius are re-extracted together from an exact local Taylor
/// expansion of the slice resultant (Cauchy samples on a circle around the
/// cluster), which stays stable where G is too flat for pointwise Newton.
void refine_branch_roots(const PencilConfig& cfg, Cplx v, std::vector<Cplx>& roots,
                         double cluster_radius = 1e-3);

/// deg X^dual = d (d-1)^2 via the Katz formula (series coefficient).
int katz_dual_degree(int d);

/// s_k = (1 + c2^12)^(-1/4) exp((2k-1) pi i / 4), k = 1..4.
std::array<Cplx, 4> base_fiber(const PencilConfig& cfg);

SetupReport verify_setup(const PencilConfig& cfg);

}  // namespace fermat

#endif
