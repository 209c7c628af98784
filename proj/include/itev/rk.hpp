#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include "itev/errors.hpp"

namespace itev::rk {

// Adaptive Dormand-Prince 5(4) with FSAL and a step callback that exposes
// both endpoints of every accepted step, so callers can interpolate or detect
// events without dense-output machinery.

struct Options {
    double rtol = 1e-10;
    double atol = 0.0;           // absolute floor in the error scale
    double mag_floor_frac = 1e-2; // fraction of running magnitude in the scale
    double h_init = 0.0;          // 0 = automatic
    double h_max = 0.0;           // 0 = span
    std::size_t max_steps = 2000000;
};

struct Stats {
    std::size_t n_accepted = 0;
    std::size_t n_rejected = 0;
    std::size_t n_rhs = 0;
    double accumulated_error = 0.0;  // sum of embedded error estimates, first component
};

enum class StepControl { Continue, Stop };

// cubic Hermite evaluation inside an accepted step
inline void hermite_point(double t0, const std::vector<double>& y0,
                          const std::vector<double>& f0, double t1,
                          const std::vector<double>& y1,
                          const std::vector<double>& f1, double t,
                          std::vector<double>& out) {
    const double h = t1 - t0;
    const double th = (t - t0) / h;
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    out.resize(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
}

namespace detail {
// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace detail

// Integrate y' = f(t, y) from t0 to t1 (either direction).  The callback is
// invoked after every accepted step and may stop the integration early; pass
// a lambda returning StepControl::Continue for plain integration.
template <class RHS, class Callback>
Stats integrate(RHS&& rhs, double t0, double t1, std::vector<double>& y,
                const Options& opt, Callback&& callback) {
    using namespace detail;
    Stats stats;
    const std::size_t n = y.size();
    if (t1 == t0) return stats;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    const double h_max = opt.h_max > 0 ? opt.h_max : span;

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n), yerr(n), ymag(n);
    for (std::size_t i = 0; i < n; ++i) ymag[i] = std::fabs(y[i]);

    rhs(t0, y.data(), k1.data());
    ++stats.n_rhs;

    auto scale_of = [&](std::size_t i, double ya, double yb) {
        return opt.atol + opt.rtol * std::max({std::fabs(ya), std::fabs(yb),
                                               opt.mag_floor_frac * ymag[i]})
               + 1e-300;
    };

    // initial step: Hairer-style guess from the first derivative, refined by
    // one explicit Euler probe
    double h;
    if (opt.h_init > 0.0) {
        h = std::min(opt.h_init, h_max);
    } else {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale_of(i, y[i], y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / n);
        d1 = std::sqrt(d1 / n);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * (d0 / d1);
        h0 = std::min(h0, h_max);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * k1[i];
        rhs(t0 + dir * h0, ytmp.data(), k2.data());
        ++stats.n_rhs;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = scale_of(i, y[i], ytmp[i]);
            d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
        }
        d2 = std::sqrt(d2 / n) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6 * span, h0 * 1e-3);
        h = std::min({100 * h0, h1, h_max});
    }

    double t = t0;
    std::vector<double> yprev(n), fprev(n);

    while (dir * (t1 - t) > 0) {
        if (stats.n_accepted + stats.n_rejected > opt.max_steps)
            throw NumericalError("rk: step budget exhausted");
        const double t_eps = 4.0 * 2.2e-16 * std::max(std::fabs(t), span);
        if (h < t_eps) {
            std::ostringstream os;
            os << "rk: step size underflow at t = " << t;
            throw NumericalError(os.str());
        }
        if (dir * (t + dir * h - t1) > 0) h = std::fabs(t1 - t); // clamp to endpoint
        const double hd = dir * h;

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hd * a21 * k1[i];
        rhs(t + c2 * hd, ytmp.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hd, ytmp.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hd, ytmp.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hd, ytmp.data(), k5.data());
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                   a64 * k4[i] + a65 * k5[i]);
        rhs(t + hd, ytmp.data(), k6.data());
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        rhs(t + hd, ynew.data(), k7.data());
        stats.n_rhs += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
            const double sc = scale_of(i, y[i], ynew[i]);
            err += (yerr[i] / sc) * (yerr[i] / sc);
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            yprev.swap(y);
            fprev.swap(k1);
            y = ynew;
            ynew.resize(n);
            k1 = k7;
            const double t_new = dir > 0 ? std::min(t + h, t1) : std::max(t - h, t1);
            stats.accumulated_error += std::fabs(yerr[0]);
            ++stats.n_accepted;
            for (std::size_t i = 0; i < n; ++i)
                ymag[i] = std::max(ymag[i], std::fabs(y[i]));
            if (callback(t, yprev, fprev, t_new, y, k1) == StepControl::Stop)
                return stats;
            t = t_new;
            const double fac = std::clamp(0.9 * std::pow(err + 1e-30, -0.2), 0.2, 5.0);
            h = std::min(h * fac, h_max);
        } else {
            ++stats.n_rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return stats;
}

template <class RHS>
Stats integrate(RHS&& rhs, double t0, double t1, std::vector<double>& y,
                const Options& opt) {
    return integrate(std::forward<RHS>(rhs), t0, t1, y, opt,
                     [](double, const std::vector<double>&, const std::vector<double>&,
                        double, const std::vector<double>&, const std::vector<double>&) {
                         return StepControl::Continue;
                     });
}

} // namespace itev::rk
