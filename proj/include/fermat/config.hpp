#ifndef FERMAT_CONFIG_HPP
#define FERMAT_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/pencil.hpp"
#include "fermat/tracker.hpp"

namespace fermat {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full run configuration. The defaults reproduce the published setup, so
/// every command runs with no config file at all. Parsing is fail-closed:
/// unknown sections or keys are errors.
struct RunConfig {
    PencilConfig pencil;  // c1 = 7/8, c2 = 3/4

    // tolerances
    double tracking_initial_step = 5e-3;
    double tracking_max_step = 2e-2;
    double tracking_min_step = 1e-12;
    double collision_eps = 1e-6;
    double max_plane_step = 0.01;   // cap on parameter-plane arclength per step
    double cluster_radius = 1e-7;   // corrector cluster re-extraction radius
    double lasso_radius_factor = 0.25;

    Cplx basis_basepoint{1.2, -2.6};

    std::string out_dir = "out";

    /// 36 polylines in the pencil parameter plane, ending at the dual points.
    /// Empty = use the built-in transcription (matching default_mu_paths).
    std::vector<std::vector<Cplx>> mu_waypoints;

    static RunConfig defaults();

    TrackOptions track_options() const;
    std::vector<PathSpec> mu_paths() const;
};

/// Parses the TOML-subset config text. Unknown keys are rejected.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

}  // namespace fermat

#endif
