#include "itev/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "itev/errors.hpp"
#include "itev/parallel.hpp"
#include "itev/rk.hpp"

namespace itev {

namespace {

// radial speed helper; g(r) = (c^2)'(r)/r with the even-extension value at 0
struct SpeedField {
    const RadialProfile* profile;
    double g0;  // (c^2)''(0)

    explicit SpeedField(const RadialProfile& p) : profile(&p) {
        g0 = p.c2_jet(0.0, 2).deriv(2);
    }

    double c2(double r) const { return profile->c2_jet(r, 0).value(); }

    double grad_over_r(double r) const {
        if (r < 1e-7) return g0;
        return profile->c2_jet(r, 1).deriv(1) / r;
    }
};

double norm2(const double* v, int d) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += v[i] * v[i];
    return acc;
}

double dot(const double* a, const double* b, int d) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) acc += a[i] * b[i];
    return acc;
}

struct RayRHS {
    const SpeedField* field;
    int d;

    void operator()(double, const double* y, double* dy) const {
        const double* x = y;
        const double* xi = y + d;
        const double r = std::sqrt(norm2(x, d));
        const double cc = field->c2(r);
        const double xi2 = norm2(xi, d);
        const double gfac = -0.5 * field->grad_over_r(r) * xi2;
        for (int i = 0; i < d; ++i) {
            dy[i] = cc * xi[i];
            dy[d + i] = gfac * x[i];
        }
    }
};

double hamiltonian(const SpeedField& field, const std::vector<double>& y, int d) {
    const double r = std::sqrt(norm2(y.data(), d));
    return 0.5 * field.c2(r) * norm2(y.data() + d, d);
}

} // namespace

RaySample trace_ray(const RadialProfile& profile, int dimension,
                    const std::vector<double>& x0, const std::vector<double>& xi0,
                    double t_max, double tol, double r_exit) {
    RayConfig cfg;
    cfg.t_max = t_max;
    cfg.tol = tol;
    cfg.r_exit = r_exit;
    return trace_ray(profile, dimension, x0, xi0, cfg);
}

RaySample trace_ray(const RadialProfile& profile, int dimension,
                    const std::vector<double>& x0, const std::vector<double>& xi0,
                    const RayConfig& cfg) {
    const int d = dimension;
    if (d < 2) throw InputError("trace_ray: dimension must be >= 2");
    if (static_cast<int>(x0.size()) != d || static_cast<int>(xi0.size()) != d)
        throw InputError("trace_ray: x0 and xi0 must have length d");
    if (!(norm2(xi0.data(), d) > 0.0))
        throw InputError("trace_ray: xi0 must be nonzero");
    if (!(cfg.t_max > 0.0)) throw InputError("trace_ray: t_max must be > 0");

    const SpeedField field(profile);
    const RayRHS rhs{&field, d};

    RaySample sample;
    sample.x0 = x0;
    sample.xi0 = xi0;

    std::vector<double> y(2 * d);
    std::copy(x0.begin(), x0.end(), y.begin());
    std::copy(xi0.begin(), xi0.end(), y.begin() + d);

    const double H0 = hamiltonian(field, y, d);
    double drift = 0.0;
    double max_radius = std::sqrt(norm2(y.data(), d));

    rk::Options opt;
    opt.rtol = cfg.tol;
    opt.atol = cfg.tol; // position components pass through zero

    const double span = cfg.t_max / std::max(1, cfg.max_checkpoints);
    double next_checkpoint = 0.0;
    sample.trajectory_checkpoints.push_back({0.0, x0, xi0});

    double exit_t0 = 0.0, exit_t1 = 0.0;
    std::vector<double> exit_y0, exit_f0, exit_y1, exit_f1;
    bool exited = false;

    auto callback = [&](double ta, const std::vector<double>& ya,
                        const std::vector<double>& fa, double tb,
                        const std::vector<double>& yb, const std::vector<double>& fb) {
        const double r = std::sqrt(norm2(yb.data(), d));
        max_radius = std::max(max_radius, r);
        drift = std::max(drift,
                         std::fabs(hamiltonian(field, yb, d) - H0) / std::max(H0, 1e-300));
        if (tb >= next_checkpoint && static_cast<int>(sample.trajectory_checkpoints.size())
                                         <= cfg.max_checkpoints) {
            sample.trajectory_checkpoints.push_back(
                {tb, std::vector<double>(yb.begin(), yb.begin() + d),
                 std::vector<double>(yb.begin() + d, yb.end())});
            next_checkpoint += span;
        }
        if (r > cfg.r_exit) {
            exited = true;
            exit_t0 = ta;
            exit_t1 = tb;
            exit_y0 = ya;
            exit_f0 = fa;
            exit_y1 = yb;
            exit_f1 = fb;
            return rk::StepControl::Stop;
        }
        return rk::StepControl::Continue;
    };

    rk::integrate(rhs, 0.0, cfg.t_max, y, opt, callback);

    if (exited) {
        // locate |x(t)| = r_exit inside the last step by Newton on the cubic
        // Hermite interpolant
        double t = exit_t1;
        std::vector<double> yt = exit_y1;
        std::vector<double> ft(2 * d);
        for (int iter = 0; iter < 30; ++iter) {
            const double r = std::sqrt(norm2(yt.data(), d));
            rhs(t, yt.data(), ft.data());
            const double drdt = dot(yt.data(), ft.data(), d) / std::max(r, 1e-300);
            const double delta = (r - cfg.r_exit) / drdt;
            t -= delta;
            t = std::clamp(t, exit_t0, exit_t1);
            rk::hermite_point(exit_t0, exit_y0, exit_f0, exit_t1, exit_y1, exit_f1, t, yt);
            if (std::fabs(delta) < 1e-13 * std::max(1.0, t)) break;
        }
        sample.exit_time = t;
        sample.exit_outward = dot(yt.data(), yt.data() + d, d) > 0.0;
        sample.max_radius = std::max(max_radius, cfg.r_exit);
    } else {
        sample.max_radius = max_radius;
    }
    sample.hamiltonian_drift = drift;
    return sample;
}

void time_reversal_roundtrip(const RadialProfile& profile, int dimension,
                             const std::vector<double>& x0,
                             const std::vector<double>& xi0, double t_max,
                             double tol, std::vector<double>& x_back,
                             std::vector<double>& xi_back) {
    const int d = dimension;
    const SpeedField field(profile);
    const RayRHS rhs{&field, d};
    std::vector<double> y(2 * d);
    std::copy(x0.begin(), x0.end(), y.begin());
    std::copy(xi0.begin(), xi0.end(), y.begin() + d);
    rk::Options opt;
    opt.rtol = tol;
    opt.atol = tol;
    rk::integrate(rhs, 0.0, t_max, y, opt);
    rk::integrate(rhs, t_max, 0.0, y, opt);
    x_back.assign(y.begin(), y.begin() + d);
    xi_back.assign(y.begin() + d, y.end());
}

HerglotzCheck herglotz_condition(const RadialProfile& profile, int grid) {
    HerglotzCheck out;
    out.min_margin = 1e300;
    for (int i = 0; i <= grid; ++i) {
        const double r = static_cast<double>(i) / grid;
        const Jet cj = profile.c_jet(r, 1);
        const double c = cj.value();
        const double margin = (c - r * cj.deriv(1)) / (c * c);
        if (margin < out.min_margin) {
            out.min_margin = margin;
            out.argmin_r = r;
        }
    }
    out.holds = out.min_margin > 0.0;
    return out;
}

namespace {

// deterministic quasi-uniform directions: Fibonacci sphere in d = 3, seeded
// normalized Gaussians otherwise
std::vector<std::vector<double>> sample_directions(int d, int n,
                                                   unsigned long long seed) {
    std::vector<std::vector<double>> dirs(n, std::vector<double>(d, 0.0));
    if (d == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n; ++i) {
            const double z = 1.0 - 2.0 * (i + 0.5) / n;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            dirs[i] = {rho * std::cos(phi), rho * std::sin(phi), z};
        }
        return dirs;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : dirs) {
        double nrm = 0.0;
        do {
            for (auto& c : v) c = gauss(rng);
            nrm = std::sqrt(norm2(v.data(), d));
        } while (nrm < 1e-8);
        for (auto& c : v) c /= nrm;
    }
    return dirs;
}

} // namespace

ScanReport nontrapping_scan(const RadialProfile& profile, int dimension,
                            ScanConfig cfg) {
    if (cfg.n_rays < 8) throw InputError("nontrapping_scan: need at least 8 rays");

    ScanReport report;
    report.n_rays = cfg.n_rays;
    report.herglotz = herglotz_condition(profile);

    // start points stratified in radius, directions interleaved against the
    // position sequence so (x0, xi0) pairs cover B1 x S^(d-1)
    const auto dirs = sample_directions(dimension, cfg.n_rays, cfg.seed);
    const auto pos_dirs = sample_directions(dimension, cfg.n_rays, cfg.seed ^ 0x9e3779b9ull);

    report.rays.resize(cfg.n_rays);
    RayConfig rc;
    rc.t_max = cfg.t_max;
    rc.tol = cfg.tol;
    rc.r_exit = cfg.r_exit;
    rc.max_checkpoints = 8;

    parallel_for(static_cast<std::size_t>(cfg.n_rays), cfg.workers, [&](std::size_t i) {
        const double radius = 0.95 * (static_cast<double>(i) + 0.5) / cfg.n_rays;
        std::vector<double> x0(dimension), xi0 = dirs[i];
        for (int c = 0; c < dimension; ++c)
            x0[c] = radius * pos_dirs[(i * 7 + 3) % cfg.n_rays][c];
        report.rays[i] = trace_ray(profile, dimension, x0, xi0, rc);
    });

    report.all_exit = true;
    for (int i = 0; i < cfg.n_rays; ++i) {
        const auto& ray = report.rays[i];
        if (ray.exit_time) {
            report.worst_exit_time = std::max(report.worst_exit_time, *ray.exit_time);
        } else {
            report.all_exit = false;
            report.trapped_candidates.push_back(i);
        }
    }
    return report;
}

nlohmann::json RaySample::to_json() const {
    nlohmann::json doc{{"x0", x0},
                       {"xi0", xi0},
                       {"max_radius", max_radius},
                       {"hamiltonian_drift", hamiltonian_drift},
                       {"exit_outward", exit_outward}};
    if (exit_time) doc["exit_time"] = *exit_time;
    else doc["exit_time"] = nullptr;
    return doc;
}

nlohmann::json ScanReport::to_json(bool include_rays) const {
    nlohmann::json doc{{"all_exit", all_exit},
                       {"worst_exit_time", worst_exit_time},
                       {"n_rays", n_rays},
                       {"trapped_candidates", trapped_candidates},
                       {"herglotz", {{"holds", herglotz.holds},
                                     {"min_margin", herglotz.min_margin},
                                     {"argmin_r", herglotz.argmin_r}}}};
    if (include_rays) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rays) arr.push_back(r.to_json());
        doc["rays"] = arr;
    }
    return doc;
}

void ScanReport::write_exit_csv(std::ostream& os) const {
    os << "ray,exit_time,max_radius,hamiltonian_drift\n";
    char buf[160];
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const auto& r = rays[i];
        if (r.exit_time)
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, *r.exit_time,
                          r.max_radius, r.hamiltonian_drift);
        else
            std::snprintf(buf, sizeof buf, "%zu,,%.17g,%.17g\n", i, r.max_radius,
                          r.hamiltonian_drift);
        os << buf;
    }
}

} // namespace itev
