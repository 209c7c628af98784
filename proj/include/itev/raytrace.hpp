#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "itev/profiles.hpp"

namespace itev {

// One integrated bicharacteristic:
//   x' = c^2(x) xi,   xi' = -1/2 grad(c^2)(x) |xi|^2
// For radial c the gradient is (c^2)'(r) x / r with the even extension at the
// origin.  H = 1/2 c^2 |xi|^2 is conserved along the flow.
struct RayCheckpoint {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> xi;
};

struct RaySample {
    std::vector<double> x0;
    std::vector<double> xi0;
    std::optional<double> exit_time;      // first time |x| > R_exit
    double max_radius = 0.0;
    double hamiltonian_drift = 0.0;       // max relative drift of H
    bool exit_outward = false;            // x . xi > 0 at the exit crossing
    std::vector<RayCheckpoint> trajectory_checkpoints;

    nlohmann::json to_json() const;
};

struct RayConfig {
    double t_max = 20.0;
    double tol = 1e-9;
    double r_exit = 2.0;
    int max_checkpoints = 64;
};

RaySample trace_ray(const RadialProfile& profile, int dimension,
                    const std::vector<double>& x0, const std::vector<double>& xi0,
                    double t_max, double tol = 1e-9, double r_exit = 2.0);
RaySample trace_ray(const RadialProfile& profile, int dimension,
                    const std::vector<double>& x0, const std::vector<double>& xi0,
                    const RayConfig& cfg);

// integrate to t_max, then back to 0; returns the recovered (x0, xi0)
void time_reversal_roundtrip(const RadialProfile& profile, int dimension,
                             const std::vector<double>& x0,
                             const std::vector<double>& xi0, double t_max,
                             double tol, std::vector<double>& x_back,
                             std::vector<double>& xi_back);

struct HerglotzCheck {
    bool holds = false;          // d/dr (r / c(r)) > 0 on the whole grid
    double min_margin = 0.0;     // min of (c - r c') / c^2
    double argmin_r = 0.0;
};

struct ScanReport {
    bool all_exit = false;
    double worst_exit_time = 0.0;
    int n_rays = 0;
    std::vector<int> trapped_candidates;    // ray indices that never exited
    std::vector<RaySample> rays;
    HerglotzCheck herglotz;

    nlohmann::json to_json(bool include_rays = false) const;
    void write_exit_csv(std::ostream& os) const;
};

struct ScanConfig {
    int n_rays = 64;
    double t_max = 20.0;
    double tol = 1e-9;
    double r_exit = 2.0;
    unsigned workers = 0;
    unsigned long long seed = 20240901ull;  // used for d != 3 direction sampling
};

ScanReport nontrapping_scan(const RadialProfile& profile, int dimension,
                            ScanConfig cfg);

HerglotzCheck herglotz_condition(const RadialProfile& profile, int grid = 2048);

} // namespace itev
