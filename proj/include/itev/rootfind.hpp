#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "itev/errors.hpp"

namespace itev {

struct RootResult {
    double x = 0.0;
    double f = 0.0;
    bool converged = false;
    int evaluations = 0;
};

// Brent's bracketing root finder (inverse quadratic / secant / bisection).
// Requires f(a) and f(b) of opposite sign; converges to |b-a| <= xtol.
template <class F>
RootResult brent(F&& f, double a, double b, double fa, double fb,
                 double xtol, int max_iter = 200) {
    RootResult out;
    if (fa == 0.0) { out = {a, 0.0, true, 0}; return out; }
    if (fb == 0.0) { out = {b, 0.0, true, 0}; return out; }
    if ((fa > 0) == (fb > 0))
        throw InputError("brent: endpoints do not bracket a root");

    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            out.x = b; out.f = fb; out.converged = true; out.evaluations = iter;
            return out;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {           // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {                // inverse quadratic
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += std::fabs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        ++out.evaluations;
    }
    out.x = b; out.f = fb; out.converged = false;
    return out;
}

// Plain bisection; used where guaranteed-but-slow is preferable.
template <class F>
double bisect(F&& f, double a, double b, double xtol, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw InputError("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) { a = m; fa = fm; }
        else b = m;
    }
    return 0.5 * (a + b);
}

} // namespace itev
