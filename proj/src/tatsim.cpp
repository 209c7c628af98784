#include "itev/tatsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "itev/errors.hpp"

namespace itev {

namespace {

double window(double r, double rho) {
    if (r >= rho) return 0.0;
    const double u = (r / rho) * (r / rho);
    return std::exp(1.0 - 1.0 / (1.0 - u));
}

} // namespace

double RadialSource::operator()(double r) const {
    double acc = 0.0;
    for (const auto& term : terms) acc += term.amplitude * window(r, term.support_radius);
    return acc;
}

double RadialSource::max_support() const {
    double s = 0.0;
    for (const auto& term : terms) s = std::max(s, term.support_radius);
    return s;
}

std::string RadialSource::id() const {
    std::ostringstream os;
    os << "source[";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) os << "+";
        os << "bump(A=" << terms[i].amplitude << ",rho=" << terms[i].support_radius << ")";
    }
    os << "]";
    return os.str();
}

nlohmann::json RadialSource::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms)
        arr.push_back({{"amplitude", t.amplitude}, {"support_radius", t.support_radius}});
    return nlohmann::json{{"terms", arr}};
}

RadialSource RadialSource::from_json(const nlohmann::json& doc) {
    RadialSource s;
    s.terms.clear();
    for (const auto& t : doc.at("terms"))
        s.terms.push_back({t.at("amplitude").get<double>(),
                           t.at("support_radius").get<double>()});
    if (s.terms.empty()) throw InputError("source document has no terms");
    return s;
}

double WaveTrace::peak_boundary() const {
    double p = 0.0;
    for (double g : boundary) p = std::max(p, std::fabs(g));
    return p;
}

WaveTrace simulate(const RadialProfile& profile, const RadialSource& source,
                   SimConfig cfg) {
    if (cfg.nr_per_unit < 16) throw InputError("simulate: need >= 16 points per unit");
    if (!(cfg.t_max > 0.0)) throw InputError("simulate: t_max must be > 0");
    if (source.max_support() > 1.0)
        throw InputError("simulate: source must be supported inside the unit ball");

    const double r_domain = cfg.r_domain > 0.0 ? cfg.r_domain : 1.0 + cfg.t_max;
    if (r_domain < 1.0 + 10.0 / cfg.nr_per_unit)
        throw InputError("simulate: domain must extend past the unit sphere");

    const double h = 1.0 / cfg.nr_per_unit;
    const int N = static_cast<int>(std::llround(r_domain * cfg.nr_per_unit));
    const int boundary_idx = cfg.nr_per_unit; // r = 1 lies on the grid

    double c_max = 0.0;
    std::vector<double> c2(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double c = profile.c(std::min(1.0, h * i)); // c = 1 past the ball
        c2[i] = c * c;
        c_max = std::max(c_max, c);
    }

    const double dt_cfl = cfg.cfl_safety * h / c_max;
    double dt = cfg.dt_override > 0.0 ? cfg.dt_override : dt_cfl;
    if (dt > h / c_max * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "simulate: CFL violation, dt = " << dt << " exceeds h/c_max = " << h / c_max;
        throw InputError(os.str());
    }
    const int steps = static_cast<int>(std::ceil(cfg.t_max / dt - 1e-12));
    dt = cfg.t_max / steps;

    // sponge damping sigma(r), ramped quadratically over the outer layer
    std::vector<double> sigma;
    if (cfg.sponge) {
        sigma.assign(N + 1, 0.0);
        const double start = r_domain - cfg.sponge_width;
        for (int i = 0; i <= N; ++i) {
            const double r = h * i;
            if (r > start) {
                const double s = (r - start) / cfg.sponge_width;
                sigma[i] = cfg.sponge_strength * s * s;
            }
        }
    }

    WaveTrace trace;
    trace.dt = dt;
    trace.t_max = cfg.t_max;
    trace.h = h;
    trace.r_domain = r_domain;
    trace.profile_id = profile.id();
    trace.source_id = source.id();
    trace.boundary.reserve(steps + 1);
    if (cfg.record_snapshots) {
        trace.snapshot_points = static_cast<int>(std::llround(
                                    std::min(cfg.snapshot_rmax, r_domain) / h)) + 1;
        trace.snapshots.reserve(steps + 1);
    }
    if (cfg.record_energy) trace.energy.reserve(steps + 1);

    // w = r u; leapfrog on w_tt = c^2 w_rr with w(0) = 0
    std::vector<double> w_prev(N + 1), w_cur(N + 1), w_next(N + 1);
    for (int i = 0; i <= N; ++i) w_prev[i] = h * i * source(h * i);
    const double lam2_base = dt * dt / (h * h);

    // first step from zero initial velocity: w^1 = w^0 + (dt^2/2) c^2 w_rr
    w_cur[0] = 0.0;
    for (int i = 1; i < N; ++i)
        w_cur[i] = w_prev[i] + 0.5 * lam2_base * c2[i] *
                                   (w_prev[i + 1] - 2.0 * w_prev[i] + w_prev[i - 1]);
    w_cur[N] = 0.0;

    auto record = [&](const std::vector<double>& w, const std::vector<double>& w_old,
                      bool first) {
        trace.boundary.push_back(w[boundary_idx]);
        if (cfg.record_snapshots) {
            std::vector<double> snap(trace.snapshot_points);
            // u(0) from the regular limit w/r -> w_r(0); one-sided stencil
            snap[0] = (4.0 * w[1] - w[2]) / (2.0 * h);
            for (int i = 1; i < trace.snapshot_points; ++i) snap[i] = w[i] / (h * i);
            trace.snapshots.push_back(std::move(snap));
        }
        if (cfg.record_energy) {
            double e = 0.0;
            for (int i = 1; i <= N; ++i) {
                const double wt = first ? 0.0 : (w[i] - w_old[i]) / dt;
                const double wr = (w[i] - w[i - 1]) / h;
                e += (wt * wt / c2[i] + wr * wr) * h;
            }
            trace.energy.push_back(e);
        }
    };

    record(w_prev, w_prev, true);
    record(w_cur, w_prev, false);

    for (int n = 1; n < steps; ++n) {
        w_next[0] = 0.0;
        if (sigma.empty()) {
            for (int i = 1; i < N; ++i)
                w_next[i] = 2.0 * w_cur[i] - w_prev[i] +
                            lam2_base * c2[i] *
                                (w_cur[i + 1] - 2.0 * w_cur[i] + w_cur[i - 1]);
        } else {
            for (int i = 1; i < N; ++i) {
                const double sd = 0.5 * sigma[i] * dt;
                w_next[i] = (2.0 * w_cur[i] - (1.0 - sd) * w_prev[i] +
                             lam2_base * c2[i] *
                                 (w_cur[i + 1] - 2.0 * w_cur[i] + w_cur[i - 1])) /
                            (1.0 + sd);
            }
        }
        w_next[N] = 0.0;
        std::swap(w_prev, w_cur);
        std::swap(w_cur, w_next);
        record(w_cur, w_prev, false);
    }
    return trace;
}

double dalembert_boundary(const RadialSource& source, double r, double t) {
    auto odd = [&](double s) { return s * source(std::fabs(s)); };
    return 0.5 * (odd(r + t) + odd(r - t)) / r;
}

DecayFit decay_fit(const WaveTrace& trace, double t1, double t2) {
    if (!(t2 > t1) || t1 < 0.0)
        throw InputError("decay_fit: need 0 <= t1 < t2");
    if (t2 > trace.t_max + 1e-12)
        throw InputError("decay_fit: window extends past the recorded trace");

    const std::size_t n = trace.boundary.size();
    std::vector<double> env(n);
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        running = std::max(running, std::fabs(trace.boundary[i]));
        env[i] = running;
    }

    const std::size_t i1 = static_cast<std::size_t>(std::ceil(t1 / trace.dt));
    const std::size_t i2 = std::min(n - 1, static_cast<std::size_t>(std::floor(t2 / trace.dt)));

    DecayFit fit;
    if (i2 <= i1 + 2) throw InputError("decay_fit: window too narrow for the grid");
    if (env[i1] <= 0.0) {
        fit.rate = std::numeric_limits<double>::infinity();
        fit.quality = 1.0;
        fit.silent = true;
        return fit;
    }

    // least squares on log env(t); any exact zero inside the window also
    // means faster-than-exponential decay
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t count = 0;
    for (std::size_t i = i1; i <= i2; ++i) {
        if (env[i] <= 0.0) {
            fit.rate = std::numeric_limits<double>::infinity();
            fit.quality = 1.0;
            fit.silent = true;
            return fit;
        }
        const double x = trace.time(i);
        const double y = std::log(env[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    const double slope = (count * sxy - sx * sy) / denom;
    fit.rate = -slope;
    const double ss_tot = syy - sy * sy / count;
    const double ss_res = ss_tot - slope * (sxy - sx * sy / count);
    fit.quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

FourierSnapshot temporal_ft(const WaveTrace& trace, double k,
                            double decay_threshold) {
    if (trace.snapshots.empty())
        throw InputError("temporal_ft: trace has no snapshots recorded");

    FourierSnapshot ft;
    ft.k = k;
    const std::size_t n = trace.snapshots.size();
    const int nr = trace.snapshot_points;
    const double dt = trace.dt;

    // decay precondition on the last 5% of the record
    const double peak = trace.peak_boundary();
    double tail_peak = 0.0;
    const std::size_t tail_start = n - std::max<std::size_t>(2, n / 20);
    for (std::size_t i = tail_start; i < n; ++i)
        tail_peak = std::max(tail_peak, std::fabs(trace.boundary[i]));
    ft.decayed = peak == 0.0 || tail_peak <= decay_threshold * peak;

    // tail rate for the endpoint correction, from the last silent-or-decaying span
    double gamma = 0.0;
    {
        const double g1 = std::fabs(trace.boundary[tail_start]);
        const double g2 = std::fabs(trace.boundary[n - 1]);
        if (g1 > 0.0 && g2 > 0.0 && g2 < g1)
            gamma = std::log(g1 / g2) / (trace.time(n - 1) - trace.time(tail_start));
    }

    ft.u_hat.assign(nr, {0.0, 0.0});
    const std::complex<double> ik(0.0, k);
    std::vector<std::complex<double>> phase(n);
    for (std::size_t i = 0; i < n; ++i)
        phase[i] = std::exp(ik * trace.time(i));

    for (int j = 0; j < nr; ++j) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += weight * trace.snapshots[i][j] * phase[i];
        }
        acc *= dt;
        // exponential endpoint model u(t) = u(T) e^(-gamma (t-T)) for the tail
        if (gamma > 0.0)
            acc += trace.snapshots[n - 1][j] * phase[n - 1] /
                   std::complex<double>(gamma, -k);
        ft.u_hat[j] = acc / (2.0 * M_PI);
    }

    const int bidx = std::min<int>(nr - 1, static_cast<int>(std::llround(1.0 / trace.h)));
    ft.boundary = ft.u_hat[bidx];
    if (gamma > 0.0)
        ft.truncation_bound = tail_peak / (gamma * 2.0 * M_PI);
    else
        ft.truncation_bound = tail_peak * (trace.t_max * 0.05) / (2.0 * M_PI);
    return ft;
}

HelmholtzResidual helmholtz_residual(const RadialProfile& profile,
                                     const FourierSnapshot& ft,
                                     const RadialSource& source, double k,
                                     double h) {
    const int nr = static_cast<int>(ft.u_hat.size());
    if (nr < 8) throw InputError("helmholtz_residual: need at least 8 radial samples");

    HelmholtzResidual out;
    double n_max = 0.0;
    for (int i = 0; i < nr; ++i) n_max = std::max(n_max, profile.n(std::min(1.0, h * i)));
    out.points_per_wavelength = 2.0 * M_PI / (k * std::sqrt(n_max) * h);
    if (out.points_per_wavelength < 4.0)
        throw InputError("helmholtz_residual: fewer than 4 points per wavelength; "
                         "refine the grid or lower k");

    // radial Laplacian via v = r u_hat: Lap u = (v'' )/r
    const int last = std::min(nr - 1, static_cast<int>(std::llround(1.0 / h)));
    std::complex<double> const ik2pi(0.0, k / (2.0 * M_PI));
    double num_inh = 0.0, den_inh = 0.0, num_hom = 0.0, den_hom = 0.0;
    for (int i = 2; i < last; ++i) {
        const double r = h * i;
        const double nv = profile.n(r);
        const double f = source(r);
        const std::complex<double> vm = (r - h) * ft.u_hat[i - 1];
        const std::complex<double> v0 = r * ft.u_hat[i];
        const std::complex<double> vp = (r + h) * ft.u_hat[i + 1];
        const std::complex<double> lap = (vp - 2.0 * v0 + vm) / (h * h * r);
        const std::complex<double> lhs = lap + k * k * nv * ft.u_hat[i];
        const std::complex<double> rhs = ik2pi * nv * f;
        num_inh += std::norm(lhs - rhs);
        den_inh += std::norm(k * k * nv * ft.u_hat[i]);
        const double lap_re = ((r + h) * ft.u_hat[i + 1].real() -
                               2.0 * r * ft.u_hat[i].real() +
                               (r - h) * ft.u_hat[i - 1].real()) / (h * h * r);
        const double lhs_re = lap_re + k * k * nv * ft.u_hat[i].real();
        num_hom += lhs_re * lhs_re;
        den_hom += std::norm(k * k * nv * ft.u_hat[i].real());
    }
    out.rel_inhomogeneous = den_inh > 0.0 ? std::sqrt(num_inh / den_inh) : 0.0;
    out.rel_homogeneous_re = den_hom > 0.0 ? std::sqrt(num_hom / den_hom) : 0.0;
    return out;
}

void WaveTrace::write_csv(std::ostream& os) const {
    os << "t,g\n";
    char buf[96];
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", time(i), boundary[i]);
        os << buf;
    }
}

nlohmann::json WaveTrace::meta_json() const {
    return nlohmann::json{{"dt", dt},
                          {"t_max", t_max},
                          {"h", h},
                          {"r_domain", r_domain},
                          {"steps", steps()},
                          {"snapshot_points", snapshot_points},
                          {"profile", profile_id},
                          {"source", source_id}};
}

void WaveTrace::write_snapshots_csv(std::ostream& os) const {
    char buf[64];
    for (const auto& snap : snapshots) {
        for (std::size_t j = 0; j < snap.size(); ++j) {
            std::snprintf(buf, sizeof buf, j + 1 == snap.size() ? "%.17g\n" : "%.17g,",
                          snap[j]);
            os << buf;
        }
    }
}

} // namespace itev
