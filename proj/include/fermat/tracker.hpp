#ifndef FERMAT_TRACKER_HPP
#define FERMAT_TRACKER_HPP

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fermat/pencil.hpp"
#include "fermat/unipoly.hpp"

namespace fermat {

struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};
struct AmbiguousMatch : std::runtime_error {
    explicit AmbiguousMatch(const std::string& what) : std::runtime_error(what) {}
};
struct BranchTooClose : std::runtime_error {
    explicit BranchTooClose(const std::string& what) : std::runtime_error(what) {}
};
struct SimultaneousCrossing : std::runtime_error {
    explicit SimultaneousCrossing(const std::string& what) : std::runtime_error(what) {}
};

enum class TerminalKind { regular, singular_endpoint };

/// Strand order for braid bookkeeping: ascending real part, slightly tilted.
/// For real path parameters the root set is conjugation-symmetric, so pairs
/// with exactly equal real parts occur throughout; the tilt breaks that
/// degeneracy while leaving every well-separated ordering unchanged.
inline constexpr double kStrandTilt = 1e-3;
inline double strand_key(Cplx z) { return z.real() + kStrandTilt * z.imag(); }
inline bool strand_less(Cplx a, Cplx b) {
    double ka = strand_key(a), kb = strand_key(b);
    if (ka != kb) return ka < kb;
    return a.imag() < b.imag();
}

/// Polyline in a complex parameter plane.
struct PathSpec {
    std::vector<Cplx> waypoints;
    TerminalKind terminal_kind = TerminalKind::regular;

    double length() const;
    /// Point at arclength fraction t in [0, 1].
    Cplx at(double t) const;
};

/// Lasso: approach a center along a straight run from the basepoint, circle
/// it counterclockwise (polygonal), come back. Stays a PathSpec.
PathSpec lasso_path(Cplx basepoint, Cplx center, double radius, int circle_segments = 24);

/// One recorded strand crossing: the strands in adjacent slots p, p+1 of the
/// (Re, Im)-ascending order swapped. sign = +1 when the strand moving
/// rightward passes with the greater imaginary part.
struct CrossEvent {
    double t = 0.0;
    int position = 0;  // 1-based slot p of the swap (p, p+1)
    int sign = +1;
};

struct TrackOptions {
    double initial_step = 5e-3;
    double max_step = 2e-2;
    double min_step = 1e-12;
    double eps_collide = 1e-6;
    /// Absolute cap on the parameter-plane arclength of one step. Chords
    /// between samples must stay homotopic to the path piece they replace,
    /// so steps may never straddle a geometric feature (e.g. a whole lasso
    /// circle) even when the roots barely move across it.
    double max_plane_step = std::numeric_limits<double>::infinity();
    bool record_positions = false;  // keep the full sampled trajectory
    /// Optional whole-set corrector (param, roots in/out). When set it
    /// replaces the per-root Newton corrector; used for families whose
    /// double-precision coefficients are too noisy near root clusters.
    std::function<void(Cplx, std::vector<Cplx>&)> precise_correct;
};

struct RootTrack {
    std::vector<double> times;
    std::vector<std::vector<Cplx>> positions;  // positions[step][label]
    std::vector<Cplx> start;                   // label order fixed here
    std::vector<Cplx> end;
    std::vector<CrossEvent> events;
    bool collided = false;
    double collide_t = 0.0;
    int delta = 0, epsilon = 0;  // 1-based labels of the colliding pair
};

/// Continuation of the full root set of family(path(t)) from t = 0 to 1 (or
/// to the collision stop for singular endpoints). Labels are the indices of
/// `start`; the adaptivity contract (per-step displacement under 1/3 of the
/// current minimal root separation) makes predictor/corrector matching valid.
RootTrack track_roots(const std::function<UniPoly(Cplx)>& family, const std::vector<Cplx>& start,
                      const PathSpec& path, const TrackOptions& opts = {});

/// Permutation of {0..3} acting on fiber labels.
struct CoverPerm {
    std::array<int, 4> map{0, 1, 2, 3};

    static CoverPerm identity() { return {}; }
    static CoverPerm transposition(int a, int b);
    int operator()(int k) const { return map[k]; }
    CoverPerm then(const CoverPerm& next) const;  // this path first, next after
    CoverPerm inverse() const;
    bool operator==(const CoverPerm& o) const { return map == o.map; }
    bool is_transposition() const;
    std::string cycle_string() const;  // 1-based, e.g. "(1 2)"
};

/// Covering monodromy of the x2-fiber of F^v along an x1-plane loop, with
/// fiber labels given by `fiber_ref` at the loop base. Returns the end-to-
/// start assignment: lift starting at label k ends at label perm(k).
CoverPerm cover_permutation(const PencilConfig& cfg, Cplx v, const PathSpec& loop,
                            const std::vector<Cplx>& fiber_ref);

/// Branch points a_1..a_12 of p_0, in the paper's labelling (a_1..a_3 from
/// the published approximations, a_{j+3} = sqrt(-1) a_j).
std::vector<Cplx> branch_points_a(const PencilConfig& cfg);

/// chi(l_j) for the star-shaped lassos at basepoint 0, j = 1..12.
std::vector<CoverPerm> chi_table(const PencilConfig& cfg, double lasso_radius_factor = 0.25);

/// Monodromy along |x1| = R counterclockwise (based at 0 through the segment
/// to R). Lemma-4.1 consequence: identity for the paper configuration.
CoverPerm infinity_permutation(const PencilConfig& cfg, Cplx v, double radius = 4.0);

/// Default mu_i polylines transcribed from the paper's path figure:
/// 0 -> 1/3 -> e^{i pi/4} -> hub -> v_i for i = 1..9, where the hub is one of
/// the three zeta points, and mu_{i+9} = sqrt(-1) mu_i.
std::vector<PathSpec> default_mu_paths(const PencilConfig& cfg);

struct CollisionRow {
    int i = 0;       // dual point label 1..36
    int delta = 0;   // colliding pair, 1-based a-labels, delta < epsilon
    int epsilon = 0;
    int distinct_g_roots = 0;       // cluster count of G^{v_i} (expected 11)
    int min_fiber_points = 0;       // min over roots of #distinct fiber points
    int max_fiber_points = 0;       // expected both 3
};

/// Tracks mu_i for one i and reports the collision data.
CollisionRow collision_row(const PencilConfig& cfg, int i, const PathSpec& mu,
                           const std::vector<Cplx>& a_start, const TrackOptions& opts = {});

/// Collision data from an already-computed singular track; vi is the path
/// endpoint (the dual point).
CollisionRow collision_row_from_track(const PencilConfig& cfg, int i, const RootTrack& track,
                                      Cplx vi);

/// All 36 rows. threads > 1 fans the independent paths out with OpenMP;
/// results are deterministic regardless of thread count.
std::vector<CollisionRow> collision_table(const PencilConfig& cfg, int threads = 1,
                                          const TrackOptions& opts = {});

/// Serial reference for collision_table: a plain loop with no OpenMP. Kept
/// for testing and benchmarking the parallel map against.
std::vector<CollisionRow> collision_table_serial(const PencilConfig& cfg,
                                                 const TrackOptions& opts = {});

/// Braid word of a track: one signed generator per crossing event.
struct BraidLetter {
    int position;  // 1-based
    int sign;      // +1 / -1
};
std::vector<BraidLetter> braid_word(const RootTrack& track);

}  // namespace fermat

#endif
