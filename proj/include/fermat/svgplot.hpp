#ifndef FERMAT_SVGPLOT_HPP
#define FERMAT_SVGPLOT_HPP

#include <string>
#include <vector>

#include "fermat/tracker.hpp"

namespace fermat {

/// All plots share a fixed 1200x1200 viewport with the mathematical
/// orientation (imaginary axis up) and are byte-deterministic for the same
/// inputs: coordinates are formatted with fixed precision and no timestamps
/// or random ids are emitted.

/// Branch points a_1..a_12 with labels, plus the coordinate axes.
std::string svg_roots(const std::vector<Cplx>& a_roots);

/// Root trajectories of one tracked path, colored by label, with the
/// colliding pair's final segment highlighted.
std::string svg_tracks(const RootTrack& track, const std::vector<Cplx>& a_roots, int path_label);

/// Overlay of the trajectories for paths 1..9 (one per base dual point).
std::string svg_arcs(const std::vector<RootTrack>& tracks, const std::vector<Cplx>& a_roots);

}  // namespace fermat

#endif
