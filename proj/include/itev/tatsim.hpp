#pragma once

#include <complex>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "itev/profiles.hpp"

namespace itev {

// Radial initial pressure built from smooth window bumps; supp f inside B1.
struct SourceTerm {
    double amplitude = 1.0;
    double support_radius = 0.5;
};

struct RadialSource {
    std::vector<SourceTerm> terms{{1.0, 0.5}};

    double operator()(double r) const;
    double max_support() const;
    std::string id() const;
    nlohmann::json to_json() const;
    static RadialSource from_json(const nlohmann::json& doc);
};

struct SimConfig {
    int nr_per_unit = 400;     // grid points per unit radius
    double t_max = 4.0;
    double r_domain = 0.0;     // 0 = outrun default 1 + t_max
    double cfl_safety = 0.9;
    double dt_override = 0.0;  // 0 = CFL-determined
    bool record_snapshots = true;
    double snapshot_rmax = 1.0;
    bool sponge = false;       // absorbing layer instead of outrunning
    double sponge_width = 1.0;
    double sponge_strength = 8.0;
    bool record_energy = false;
};

// Boundary trace of the forward wave solve plus optional interior snapshots.
// The radial reduction w = r u turns the 3-d problem into w_tt = c^2 w_rr
// with w(0, t) = 0.
struct WaveTrace {
    double dt = 0.0;
    double t_max = 0.0;
    double h = 0.0;
    double r_domain = 0.0;
    std::vector<double> boundary;           // u(1, t_i), i = 0..n_steps
    std::vector<std::vector<double>> snapshots; // u(r_j, t_i) for r_j <= snapshot_rmax
    int snapshot_points = 0;
    std::vector<double> energy;             // discrete energy per step (optional)
    std::string profile_id;
    std::string source_id;

    double time(std::size_t i) const { return dt * static_cast<double>(i); }
    std::size_t steps() const { return boundary.empty() ? 0 : boundary.size() - 1; }
    double peak_boundary() const;

    void write_csv(std::ostream& os) const;          // t, g(t)
    nlohmann::json meta_json() const;                // grid metadata sidecar
    void write_snapshots_csv(std::ostream& os) const;
};

WaveTrace simulate(const RadialProfile& profile, const RadialSource& source,
                   SimConfig cfg);

// closed-form boundary trace for c = 1 via the odd extension of r f(r)
double dalembert_boundary(const RadialSource& source, double r, double t);

struct DecayFit {
    double rate = 0.0;        // fitted epsilon; +inf marker when the window is silent
    double quality = 0.0;     // R^2 of the log-envelope fit
    bool silent = false;      // trace identically zero on the window
};

DecayFit decay_fit(const WaveTrace& trace, double t1, double t2);

struct FourierSnapshot {
    double k = 0.0;
    std::vector<std::complex<double>> u_hat;  // on the snapshot r grid
    std::complex<double> boundary;            // u_hat at r = 1
    double truncation_bound = 0.0;            // estimated tail of the time integral
    bool decayed = true;                      // trace below threshold at t_max
};

FourierSnapshot temporal_ft(const WaveTrace& trace, double k,
                            double decay_threshold = 1e-4);

struct HelmholtzResidual {
    double rel_inhomogeneous = 0.0;  // residual of the u_hat equation with source
    double rel_homogeneous_re = 0.0; // residual of the Re(u_hat) equation
    double points_per_wavelength = 0.0;
};

HelmholtzResidual helmholtz_residual(const RadialProfile& profile,
                                     const FourierSnapshot& ft,
                                     const RadialSource& source, double k,
                                     double h);

} // namespace itev
