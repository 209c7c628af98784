#include "itev/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "itev/errors.hpp"

namespace itev {

namespace {

struct GaussLegendre {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// nodes by Newton iteration on P_n; standard three-term recurrence
GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    return gl;
}

double panel_integral(const RadialProfile& p, const GaussLegendre& gl,
                      double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * p.phi_jet(mid + half * gl.nodes[i], 0).value();
    return acc * half;
}

double composite_endpoint(const RadialProfile& p, const GaussLegendre& gl, int panels) {
    double sum = 0.0, comp = 0.0; // Kahan
    for (int j = 0; j < panels; ++j) {
        const double v = panel_integral(p, gl, static_cast<double>(j) / panels,
                                        static_cast<double>(j + 1) / panels);
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// 1/4 n''/n^2 - 5/16 n'^2/n^3 straight from the closed-form jets; the bump
// window's high derivatives near the support edge are too violent for a
// tabulated interpolant at the accuracy p_m needs
double curvature_direct(const RadialProfile& profile, double r) {
    const Jet nj = profile.n_jet(r, 2);
    const double n0 = nj.value();
    const double n1 = nj.deriv(1);
    const double n2 = nj.deriv(2);
    return 0.25 * n2 / (n0 * n0) - (5.0 / 16.0) * n1 * n1 / (n0 * n0 * n0);
}

} // namespace

LiouvilleFrame LiouvilleFrame::build(const RadialProfile& profile, FrameConfig cfg) {
    if (cfg.quad_order < 4) throw InputError("build_frame: quad_order must be >= 4");
    if (!(profile.sigma() > 0.0))
        throw NumericalError("build_frame: profile violates positivity, integrand "
                             "sqrt(n) undefined");

    LiouvilleFrame f;
    f.profile_ = std::make_shared<RadialProfile>(profile);

    const GaussLegendre gl = gauss_legendre(cfg.quad_order);

    // endpoint integral at doubling panel counts until two resolutions agree
    int panels = cfg.min_panels;
    double c_prev = composite_endpoint(profile, gl, panels);
    double c_cur = c_prev;
    bool converged = false;
    while (panels < cfg.max_panels) {
        panels *= 2;
        c_cur = composite_endpoint(profile, gl, panels);
        if (std::fabs(c_cur - c_prev) <= cfg.endpoint_tol * std::max(1.0, std::fabs(c_cur))) {
            converged = true;
            break;
        }
        c_prev = c_cur;
    }
    if (!converged) {
        std::ostringstream os;
        os << "build_frame: endpoint integral did not stabilize to " << cfg.endpoint_tol
           << " by " << cfg.max_panels << " panels (last delta "
           << std::fabs(c_cur - c_prev) << ")";
        throw NumericalError(os.str());
    }
    f.C_coarse_ = c_prev;

    // dense tables on a uniform r grid; eta accumulates panel integrals with
    // compensated summation so the table stays ulp-consistent
    const int T = cfg.table_size;
    const double dr = 1.0 / T;
    std::vector<double> eta_v(T + 1), phi_v(T + 1), phi_s(T + 1), n_v(T + 1), n_s(T + 1);
    double sum = 0.0, comp = 0.0;
    for (int j = 0; j <= T; ++j) {
        const double r = static_cast<double>(j) / T;
        if (j > 0) {
            const double v = panel_integral(profile, gl, static_cast<double>(j - 1) / T, r);
            const double y = v - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        eta_v[j] = sum;
        const Jet phij = profile.phi_jet(r, 1);
        phi_v[j] = phij.value();
        phi_s[j] = phij.deriv(1);
        const Jet nj = profile.n_jet(r, 1);
        n_v[j] = nj.value();
        n_s[j] = nj.deriv(1);
    }
    f.C_ = eta_v[T];
    if (std::fabs(f.C_ - f.C_coarse_) > cfg.endpoint_tol * std::max(1.0, f.C_) * 4.0)
        throw NumericalError("build_frame: table endpoint disagrees with quadrature "
                             "refinement");

    f.eta_table_ = HermiteTable(0.0, dr, eta_v, phi_v);
    f.phi_table_ = HermiteTable(0.0, dr, phi_v, phi_s);
    f.n_table_ = HermiteTable(0.0, dr, n_v, n_s);

    // inverse table on a uniform eta grid, refined by Newton against the
    // forward table
    std::vector<double> r_v(T + 1), r_s(T + 1);
    const double de = f.C_ / T;
    double r_guess = 0.0;
    for (int k = 0; k <= T; ++k) {
        const double eta = k == T ? f.C_ : de * k;
        if (k == 0) {
            r_v[0] = 0.0;
            r_s[0] = 1.0 / phi_v[0];
            continue;
        }
        double r = std::min(1.0, r_guess + de / f.phi_table_.eval(std::min(1.0, r_guess)));
        for (int it = 0; it < 8; ++it) {
            const double resid = f.eta_table_.eval(r) - eta;
            const double step = resid / f.phi_table_.eval(r);
            r -= step;
            r = std::clamp(r, 0.0, 1.0);
            if (std::fabs(resid) <= 2e-16 * std::max(eta, 1e-3 * f.C_)) break;
        }
        r_v[k] = k == T ? 1.0 : r;
        r_s[k] = 1.0 / f.phi_table_.eval(r_v[k]);
        r_guess = r;
    }
    f.r_table_ = HermiteTable(0.0, de, r_v, r_s);

    // origin Taylor data of phi = sqrt(n); odd coefficients vanish identically
    // because the window formulas enter through (r/rho)^2
    const Jet phi0 = profile.phi_jet(0.0, 8);
    f.phi_even_ = {phi0.a[0], phi0.a[2], phi0.a[4], phi0.a[6]};
    const double f8 = phi0.a[8];
    f.origin_limit_ = -(4.0 / 3.0) * f.phi_even_[1] / std::pow(f.phi_even_[0], 3);

    // crossover: balance the series truncation model (16/9)|f8| r^6 / f0^3
    // against the ~4 ulp cancellation of the direct subtraction, clamped to
    // [crossover_factor * C, cap]; the cap keeps the origin series inside its
    // validity region
    {
        const double f0 = f.phi_even_[0];
        double cap = 0.25 * f.C_;
        const double flat = profile.origin_flat_radius();
        if (flat > 0.0 && flat < 1.0)
            cap = std::min(cap, 0.9 * f.eta_table_.eval(flat));
        else if (flat == 0.0 && profile.support_radius() < 1.0)
            cap = std::min(cap, 0.5 * f.eta_table_.eval(profile.support_radius()));
        double eta_c = cap;
        if (std::fabs(f8) > 1e-12) {
            const double eps_direct = 4.0 * 2.2e-16;
            eta_c = std::pow(eps_direct * (9.0 / 16.0) * std::pow(f0, 9) / std::fabs(f8),
                             1.0 / 8.0);
        }
        const double floor = std::min(cfg.crossover_factor * f.C_, cap);
        f.eta_c_ = std::clamp(eta_c, floor, cap);
    }

    return f;
}

double LiouvilleFrame::eta_of_r(double r) const {
    if (r < -1e-12 || r > 1.0 + 1e-12)
        throw InputError("eta_of_r: r outside [0,1]");
    r = std::clamp(r, 0.0, 1.0);
    if (r == 0.0) return 0.0;
    if (r == 1.0) return C_;
    return eta_table_.eval(r);
}

double LiouvilleFrame::r_of_eta(double eta) const {
    if (eta < -1e-12 * C_ || eta > C_ * (1.0 + 1e-12))
        throw InputError("r_of_eta: eta outside [0, C]");
    eta = std::clamp(eta, 0.0, C_);
    if (eta == 0.0) return 0.0;
    if (eta == C_) return 1.0;
    double r = std::clamp(r_table_.eval(eta), 0.0, 1.0);
    // polish against the forward table until the residual sits at the ulp floor
    for (int it = 0; it < 4; ++it) {
        const double resid = eta_table_.eval(r) - eta;
        if (std::fabs(resid) <= 2.2e-16 * std::max(eta, 1e-3 * C_)) break;
        r = std::clamp(r - resid / phi_table_.eval(r), 0.0, 1.0);
    }
    return r;
}

double LiouvilleFrame::curvature_terms(double r) const {
    return curvature_direct(*profile_, std::clamp(r, 0.0, 1.0));
}

double LiouvilleFrame::singular_core_series(double eta) const {
    const double x = r_of_eta(eta);
    const double f0 = phi_even_[0], f2 = phi_even_[1], f4 = phi_even_[2],
                 f6 = phi_even_[3];
    const double x2 = x * x;
    // reduced polynomials with the singular powers of x factored out:
    //   (eta - r phi)/x^3, (eta + r phi)/x, (r phi)/x, eta/x
    const double D = -((2.0 / 3.0) * f2 + ((4.0 / 5.0) * f4 + (6.0 / 7.0) * f6 * x2) * x2);
    const double E = f0 + (f2 / 3.0 + (f4 / 5.0 + f6 / 7.0 * x2) * x2) * x2;
    const double P = f0 + (f2 + (f4 + f6 * x2) * x2) * x2;
    return D * (E + P) / ((P * P) * (E * E));
}

double LiouvilleFrame::singular_core_direct(double eta) const {
    const double r = r_of_eta(eta);
    const double nr = n_table_.eval(r);
    return 1.0 / (r * r * nr) - 1.0 / (eta * eta);
}

double LiouvilleFrame::singular_core(double eta) const {
    return eta < eta_c_ ? singular_core_series(eta) : singular_core_direct(eta);
}

double LiouvilleFrame::potential(int m, double eta) const {
    if (m < 0) throw InputError("potential: m must be >= 0");
    const double r = r_of_eta(eta); // also range-checks eta
    double p = curvature_direct(*profile_, r);
    if (m > 0) {
        const double core = eta < eta_c_
            ? singular_core_series(eta)
            : 1.0 / (r * r * n_table_.eval(r)) - 1.0 / (eta * eta);
        p += static_cast<double>(m) * (m + 1) * core;
    }
    return p;
}

LiouvilleFrame build_frame(const RadialProfile& profile, int quad_order) {
    FrameConfig cfg;
    cfg.quad_order = quad_order;
    return LiouvilleFrame::build(profile, cfg);
}

double potential(const LiouvilleFrame& frame, int m, double eta) {
    return frame.potential(m, eta);
}

} // namespace itev
