#include "itev/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "itev/errors.hpp"
#include "itev/rk.hpp"

namespace itev {

namespace {

// degree-4 interpolation of f at Chebyshev-extrema nodes on [0, delta],
// returned as monomial coefficients (divided differences, then expansion)
std::array<double, 5> fit_poly4(const LiouvilleFrame& frame, int m, double delta) {
    constexpr int N = 5;
    std::array<double, N> x{}, d{};
    for (int j = 0; j < N; ++j) {
        x[j] = 0.5 * delta * (1.0 - std::cos(M_PI * j / (N - 1)));
        d[j] = frame.potential(m, x[j]);
    }
    for (int level = 1; level < N; ++level)
        for (int j = N - 1; j >= level; --j)
            d[j] = (d[j] - d[j - 1]) / (x[j] - x[j - level]);
    // Newton form -> monomials
    std::array<double, N> poly{};
    poly[0] = d[N - 1];
    int deg = 0;
    for (int j = N - 2; j >= 0; --j) {
        ++deg;
        for (int i = deg; i >= 1; --i) poly[i] = poly[i - 1] - x[j] * poly[i];
        poly[0] = d[j] - x[j] * poly[0];
    }
    return poly;
}

} // namespace

void FrobeniusSeries::eval(double eta, double& value, double& slope) const {
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        s0 = s0 * eta + coeffs[i];
        s1 = s1 * eta + static_cast<double>(m + 1 + i) * coeffs[i];
    }
    const double head = std::pow(eta, m); // eta^(m+1) split to keep slope exact at eta -> 0
    value = head * eta * s0;
    slope = head * s1;
}

FrobeniusSeries frobenius_startup(const LiouvilleFrame& frame, int m, double k,
                                  double delta, int series_order) {
    FrobeniusSeries s;
    s.m = m;
    s.delta = delta;
    s.q = fit_poly4(frame, m, delta);
    s.q[0] -= k * k;
    s.coeffs.assign(static_cast<std::size_t>(series_order) + 1, 0.0);
    s.coeffs[0] = 1.0;
    // a_i i (2m+1+i) = sum_j q_j a_(i-2-j); a_1 = 0
    for (int i = 2; i <= series_order; ++i) {
        double acc = 0.0;
        const int jmax = std::min(4, i - 2);
        for (int j = 0; j <= jmax; ++j) acc += s.q[j] * s.coeffs[i - 2 - j];
        s.coeffs[i] = acc / (static_cast<double>(i) * (2.0 * m + 1.0 + i));
    }
    return s;
}

namespace {

struct PreparedStart {
    FrobeniusSeries series;
    double x0 = 0.0, dx0 = 0.0;
    double trunc_estimate = 0.0;
};

PreparedStart prepare_start(const LiouvilleFrame& frame, int m, double k,
                            const SolveOptions& opts) {
    const double C = frame.endpoint();
    double delta = opts.handoff > 0.0
        ? opts.handoff
        : std::min(1e-2 * C, std::pow(opts.tol, 1.0 / (opts.series_order + 1)));
    delta = std::min(delta, 0.25 * C);

    for (int attempt = 0;; ++attempt) {
        PreparedStart ps;
        ps.series = frobenius_startup(frame, m, k, delta, opts.series_order);
        ps.series.eval(delta, ps.x0, ps.dx0);
        // tail estimate: last two retained terms relative to the series head
        const auto& a = ps.series.coeffs;
        const std::size_t s = a.size() - 1;
        double tail = std::fabs(a[s]) * std::pow(delta, static_cast<double>(s));
        if (s >= 1) tail += std::fabs(a[s - 1]) * std::pow(delta, static_cast<double>(s - 1));
        ps.trunc_estimate = tail * std::fabs(std::pow(delta, m + 1));
        if (tail < 1e-10) return ps;
        if (attempt >= 6) {
            std::ostringstream os;
            os << "solve_regular: startup series not converged at handoff " << delta
               << " (m=" << m << ", k=" << k << ", tail " << tail << ")";
            throw NumericalError(os.str());
        }
        delta *= 0.5;
    }
}

} // namespace

ModeSolution solve_regular_sampled(const LiouvilleFrame& frame, int m, double k,
                                   SolveOptions opts) {
    if (m < 0) throw InputError("solve_regular: m must be >= 0");
    if (k < 0.0) throw InputError("solve_regular: k must be >= 0");
    if (!(opts.tol >= 1e-13 && opts.tol <= 1e-6))
        throw InputError("solve_regular: tol must lie in [1e-13, 1e-6]");
    if (opts.series_order < 4 || opts.series_order > 24)
        throw InputError("solve_regular: series_order must lie in [4, 24]");

    const double C = frame.endpoint();
    const PreparedStart start = prepare_start(frame, m, k, opts);
    const double delta = start.series.delta;

    ModeSolution sol;
    sol.end.m = m;
    sol.end.k = k;
    sol.end.handoff = delta;

    const double mm1 = static_cast<double>(m) * (m + 1);
    auto rhs = [&](double eta, const double* y, double* dy) {
        dy[0] = y[1];
        dy[1] = (mm1 / (eta * eta) + frame.potential(m, eta) - k * k) * y[0];
    };

    std::vector<double> y = {start.x0, start.dx0};
    rk::Options ropt;
    ropt.rtol = opts.tol;
    ropt.atol = 0.0;
    rk::Stats total;

    if (opts.n_samples > 0) {
        if (opts.n_samples < 5)
            throw InputError("solve_regular: need at least 5 samples");
        sol.eta.resize(opts.n_samples);
        sol.value.resize(opts.n_samples);
        sol.slope.resize(opts.n_samples);
        const double h = (C - delta) / (opts.n_samples - 1);
        sol.eta[0] = delta;
        sol.value[0] = y[0];
        sol.slope[0] = y[1];
        for (int i = 1; i < opts.n_samples; ++i) {
            const double target = i == opts.n_samples - 1 ? C : delta + h * i;
            const rk::Stats st = rk::integrate(rhs, sol.eta[i - 1], target, y, ropt);
            total.n_accepted += st.n_accepted;
            total.accumulated_error += st.accumulated_error;
            sol.eta[i] = target;
            sol.value[i] = y[0];
            sol.slope[i] = y[1];
        }
    } else {
        total = rk::integrate(rhs, delta, C, y, ropt);
    }

    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
        std::ostringstream os;
        os << "solve_regular: non-finite endpoint data (m=" << m << ", k=" << k
           << "); mode order too large for double range";
        throw NumericalError(os.str());
    }

    sol.end.value_at_end = y[0];
    sol.end.slope_at_end = y[1];
    sol.end.n_steps = total.n_accepted;
    sol.end.est_error = total.accumulated_error + start.trunc_estimate;
    return sol;
}

ModeEndpointData solve_regular(const LiouvilleFrame& frame, int m, double k,
                               double tol) {
    SolveOptions opts;
    opts.tol = tol;
    return solve_regular_sampled(frame, m, k, opts).end;
}

double residual_check(const LiouvilleFrame& frame, int m, double k,
                      const ModeSolution& solution) {
    const auto& eta = solution.eta;
    const auto& x = solution.value;
    if (eta.size() < 5)
        throw InputError("residual_check: need at least 5 samples");
    const double h = eta[1] - eta[0];
    for (std::size_t i = 1; i < eta.size(); ++i)
        if (std::fabs((eta[i] - eta[i - 1]) - h) > 1e-9 * h)
            throw InputError("residual_check: samples must be uniform");

    const double mm1 = static_cast<double>(m) * (m + 1);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < eta.size(); ++i) {
        const double second = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (h * h);
        const double coeff = mm1 / (eta[i] * eta[i]) + frame.potential(m, eta[i]) - k * k;
        worst = std::max(worst, std::fabs(second - coeff * x[i]));
    }
    return worst;
}

} // namespace itev
