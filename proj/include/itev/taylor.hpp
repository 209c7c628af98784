#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace itev {

// Truncated Taylor series arithmetic ("jets") up to order kMaxJetOrder.
//
// A Jet holds the coefficients f(x0), f'(x0)/1!, ..., f^(n)(x0)/n! of a
// function expanded at a point.  Propagating a jet through the closed-form
// speed formulas yields analytic derivatives of any order we need without
// finite differencing.  Division and exp use the standard convolution
// recurrences.
inline constexpr int kMaxJetOrder = 8;

struct Jet {
    std::array<double, kMaxJetOrder + 1> a{};
    int ord = kMaxJetOrder;

    Jet() = default;
    explicit Jet(double value, int order = kMaxJetOrder) : ord(order) { a[0] = value; }

    // the identity function x at expansion point x0
    static Jet variable(double x0, int order = kMaxJetOrder) {
        Jet j(x0, order);
        if (order >= 1) j.a[1] = 1.0;
        return j;
    }

    double value() const { return a[0]; }

    // k-th derivative (coefficient times k!)
    double deriv(int k) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return a[static_cast<std::size_t>(k)] * fact;
    }
};

inline Jet operator+(const Jet& x, const Jet& y) {
    Jet z(0.0, x.ord < y.ord ? x.ord : y.ord);
    for (int i = 0; i <= z.ord; ++i) z.a[i] = x.a[i] + y.a[i];
    return z;
}

inline Jet operator-(const Jet& x, const Jet& y) {
    Jet z(0.0, x.ord < y.ord ? x.ord : y.ord);
    for (int i = 0; i <= z.ord; ++i) z.a[i] = x.a[i] - y.a[i];
    return z;
}

inline Jet operator+(const Jet& x, double s) {
    Jet z = x;
    z.a[0] += s;
    return z;
}
inline Jet operator+(double s, const Jet& x) { return x + s; }

inline Jet operator-(const Jet& x, double s) { return x + (-s); }

inline Jet operator-(double s, const Jet& x) {
    Jet z(0.0, x.ord);
    z.a[0] = s - x.a[0];
    for (int i = 1; i <= z.ord; ++i) z.a[i] = -x.a[i];
    return z;
}

inline Jet operator-(const Jet& x) { return 0.0 - x; }

inline Jet operator*(const Jet& x, double s) {
    Jet z = x;
    for (int i = 0; i <= z.ord; ++i) z.a[i] *= s;
    return z;
}
inline Jet operator*(double s, const Jet& x) { return x * s; }

inline Jet operator*(const Jet& x, const Jet& y) {
    Jet z(0.0, x.ord < y.ord ? x.ord : y.ord);
    for (int i = 0; i <= z.ord; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) acc += x.a[j] * y.a[i - j];
        z.a[i] = acc;
    }
    return z;
}

// reciprocal: w = 1/x, w_k = -(1/x_0) sum_{j=1..k} x_j w_{k-j}
inline Jet reciprocal(const Jet& x) {
    Jet w(0.0, x.ord);
    const double inv0 = 1.0 / x.a[0];
    w.a[0] = inv0;
    for (int k = 1; k <= w.ord; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += x.a[j] * w.a[k - j];
        w.a[k] = -inv0 * acc;
    }
    return w;
}

inline Jet operator/(const Jet& x, const Jet& y) { return x * reciprocal(y); }
inline Jet operator/(double s, const Jet& y) { return reciprocal(y) * s; }
inline Jet operator/(const Jet& x, double s) { return x * (1.0 / s); }

// s = exp(g): k s_k = sum_{j=1..k} j g_j s_{k-j}
inline Jet exp(const Jet& g) {
    Jet s(0.0, g.ord);
    s.a[0] = std::exp(g.a[0]);
    for (int k = 1; k <= s.ord; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * g.a[j] * s.a[k - j];
        s.a[k] = acc / k;
    }
    return s;
}

// jet of f' from the jet of f (order drops by one)
inline Jet derivative(const Jet& x) {
    Jet d(0.0, x.ord > 0 ? x.ord - 1 : 0);
    for (int k = 1; k <= x.ord; ++k) d.a[k - 1] = k * x.a[k];
    return d;
}

inline Jet pow_int(const Jet& x, int p) {
    Jet z(1.0, x.ord);
    Jet base = x;
    int e = p < 0 ? -p : p;
    while (e > 0) {
        if (e & 1) z = z * base;
        base = base * base;
        e >>= 1;
    }
    return p < 0 ? reciprocal(z) : z;
}

} // namespace itev
