#ifndef FERMAT_PIPELINE_HPP
#define FERMAT_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "fermat/config.hpp"
#include "fermat/surface.hpp"
#include "fermat/symplectic.hpp"
#include "fermat/tracker.hpp"

namespace fermat {

/// Wraps a stage failure so the CLI can name the stage and the path index.
struct StageError : std::runtime_error {
    std::string stage;
    int index;  // 1-based path label when applicable, else 0
    StageError(std::string stage_, int index_, const std::string& what)
        : std::runtime_error(what), stage(std::move(stage_)), index(index_) {}
};

struct TablesData {
    SetupReport setup;
    std::vector<DualPoint> dual_points;
    std::vector<Cplx> a_roots;
    std::vector<CoverPerm> chi;  // chi(l_j), j = 1..12
    CoverPerm infinity;
    std::vector<CollisionRow> collisions;
};

struct CyclesData {
    TablesData tables;
    std::vector<RootTrack> tracks;  // 36, positions recorded for plotting
    std::vector<VanishingLasso> lassos;
    RibbonSurface surface;
    std::vector<HomologyCycle> classes;
    RelationReport relation;
    std::int64_t mod2_order = 0;
    std::map<std::string, double> timings;  // seconds per stage
};

TablesData run_tables(const RunConfig& cfg, int threads);
CyclesData run_cycles(const RunConfig& cfg, int threads);

/// Deterministic JSON (sorted keys, 12 significant digits, complex values as
/// {"im":..., "re":...}). Timing data is excluded; it goes to a sidecar.
std::string tables_json(const TablesData& t);
std::string report_json(const CyclesData& c);
std::string timings_json(const CyclesData& c);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fermat

#endif
