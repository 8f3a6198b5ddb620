#ifndef FERMAT_SURFACE_HPP
#define FERMAT_SURFACE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fermat/tracker.hpp"

namespace fermat {

struct BasisArcsCross : std::runtime_error {
    explicit BasisArcsCross(const std::string& what) : std::runtime_error(what) {}
};
struct NonAdjacentCollision : std::runtime_error {
    explicit NonAdjacentCollision(const std::string& what) : std::runtime_error(what) {}
};
struct UnequalLocalMonodromy : std::runtime_error {
    explicit UnequalLocalMonodromy(const std::string& what) : std::runtime_error(what) {}
};
struct NotTransitive : std::runtime_error {
    explicit NotTransitive(const std::string& what) : std::runtime_error(what) {}
};
struct EulerMismatch : std::runtime_error {
    explicit EulerMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct RankMismatch : std::runtime_error {
    explicit RankMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NotClosed : std::runtime_error {
    explicit NotClosed(const std::string& what) : std::runtime_error(what) {}
};
struct LiftMismatch : std::runtime_error {
    explicit LiftMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NullClass : std::runtime_error {
    explicit NullClass(const std::string& what) : std::runtime_error(what) {}
};

/// Reduced free-group word over abstract letters h_1..h_n. A letter is a
/// nonzero integer: +k stands for h_k, -k for its inverse, 1-based.
using FreeWord = std::vector<int>;

FreeWord word_reduce(FreeWord w);
FreeWord word_mul(const FreeWord& a, const FreeWord& b);  // a then b, reduced
FreeWord word_inverse(const FreeWord& a);

/// Image of a word under the cover monodromy, given the images of the
/// single letters. Letters act in left-to-right (path) order.
CoverPerm chi_eval(const FreeWord& w, const std::vector<CoverPerm>& letter_perms);

/// Ordered geometric free-group basis of the punctured plane together with
/// the cover monodromy image of each generator.
struct GeneratorTuple {
    std::vector<FreeWord> words;   // slot p holds the word of the p-th lasso
    std::vector<CoverPerm> perms;  // chi of each word
    std::vector<CoverPerm> letter_perms;  // chi of the original letters h_k

    CoverPerm eval(const FreeWord& w) const { return chi_eval(w, letter_perms); }
    /// Ordered product of all words, freely reduced.
    FreeWord product_word() const;
    CoverPerm product_perm() const;
};

/// Geometric basis from a basepoint below all punctures: straight-run lassos,
/// tuple slots in (Re, Im)-ascending puncture order (which must agree with
/// the clockwise fan order seen from the basepoint). Each generator is the
/// single letter h_p; perms are computed numerically from the cover of the
/// x2-fiber of F^v.
GeneratorTuple ordered_basis(const PencilConfig& cfg, Cplx v, const std::vector<Cplx>& punctures,
                             Cplx basepoint);

/// Artin/Hurwitz move at slot p (1-based, 1 <= p <= 11 for 12 slots).
/// sign +1: (w_p, w_{p+1}) -> (w_p w_{p+1} w_p^{-1}, w_p); -1 is its inverse.
GeneratorTuple hurwitz_move(const GeneratorTuple& t, int p, int sign);

/// Left fold of hurwitz_move over a braid word.
GeneratorTuple transport(const GeneratorTuple& t, const std::vector<BraidLetter>& word);

/// Boundary word of the collision segment of a singular track: the product
/// of the two adjacent transported lassos around the colliding punctures.
struct VanishingLasso {
    FreeWord word;  // w_i = W_p W_{p+1}, reduced; chi(word) = identity
    CoverPerm tau;  // common transposition chi(W_p) = chi(W_{p+1})
    int sheet_a = 0, sheet_b = 0;  // supp(tau), 0-based sheets
    int position = 0;              // 1-based slot p of the colliding pair at t0
};
VanishingLasso vanishing_lasso(const GeneratorTuple& base, const RootTrack& track);

/// Integer homology class in the chosen rank-6 basis of H_1 of the fiber.
struct HomologyCycle {
    std::array<std::int64_t, 6> coords{};

    bool is_zero() const;
    bool primitive() const;  // gcd of coordinates is 1
    bool operator==(const HomologyCycle& o) const { return coords == o.coords; }
};

/// Antisymmetric unimodular pairing on the rank-6 basis.
struct IntersectionForm {
    std::array<std::array<std::int64_t, 6>, 6> matrix{};

    std::int64_t pair(const HomologyCycle& x, const HomologyCycle& y) const;
    std::int64_t det() const;
    bool antisymmetric() const;
};

/// Combinatorial closed surface of the branched cover: lifts of the base
/// star-tree (basepoint joined to each puncture and to infinity), with the
/// rotation system induced from the base fan order. Carries the homology
/// reduction (spanning-tree fundamental cycles modulo face boundaries) and
/// the fatgraph intersection form.
struct RibbonSurface {
    int sheets = 0;
    int V = 0, E = 0, F = 0;
    int euler = 0, genus = 0;
    int cycle_rank = 0;  // E - V + 1
    int h1_rank = 0;     // 2 * genus

    std::vector<CoverPerm> letter_perms;  // monodromy of each puncture arc
    CoverPerm infinity_perm;

    // edge id of the lift of base arc k (0-based puncture index, or
    // n_punctures for the infinity arc) in sheet s, oriented base -> target
    int edge_id(int k, int s) const { return k * sheets + s; }

    std::vector<int> nontree;        // edge ids of the non-tree edges
    std::vector<int> nontree_index;  // edge id -> index into nontree, or -1

    // pairing of the fundamental cycles of the non-tree edges
    std::vector<std::vector<std::int64_t>> omega;  // cycle_rank x cycle_rank
    // row-reduction U of the face-relation matrix; the last h1_rank rows of
    // U give the homology coordinates of a cycle vector
    std::vector<std::vector<std::int64_t>> U;     // cycle_rank x cycle_rank
    std::vector<std::vector<std::int64_t>> Uinv;  // inverse of U

    IntersectionForm form;

    /// Coordinates of a 1-cycle given as a signed edge vector (length E).
    HomologyCycle reduce(const std::vector<std::int64_t>& edge_vec) const;
};

/// Builds the branched-cover surface over the star tree. `punctures` and
/// `basepoint` fix the fan order; `perms` are the puncture-arc monodromies
/// and `infinity` the monodromy of the arc to infinity (boundary loop).
RibbonSurface build_ribbon_surface(const std::vector<Cplx>& punctures, Cplx basepoint,
                                   const std::vector<CoverPerm>& perms, const CoverPerm& infinity,
                                   int sheets = 4);

/// Signed lifted edge-walk of a word starting on a given sheet (0-based).
/// Throws NotClosed when chi(word) moves the start sheet.
std::vector<std::int64_t> lift_word_edges(const RibbonSurface& s, const FreeWord& word,
                                          int start_sheet);

HomologyCycle lift_word_to_cycle(const RibbonSurface& s, const FreeWord& word, int start_sheet);

/// Common homology class of the two sheet-lifts of a vanishing lasso.
HomologyCycle vanishing_cycle_class(const RibbonSurface& s, const VanishingLasso& lasso);

}  // namespace fermat

#endif
