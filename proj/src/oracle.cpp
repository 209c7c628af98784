#include "itev/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "itev/errors.hpp"
#include "itev/rootfind.hpp"

namespace itev::oracle {

namespace {

// j_m(z) = z^m/(2m+1)!! * sum_i t_i with t_0 = 1,
// t_(i+1) = t_i * (-z^2/2) / ((i+1)(2m+2i+3))
double jn_series(int m, double z) {
    double sum = 1.0, term = 1.0;
    const double z2h = -0.5 * z * z;
    for (int i = 0; i < 200; ++i) {
        term *= z2h / ((i + 1.0) * (2.0 * m + 2.0 * i + 3.0));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    double head = 1.0;
    for (int l = 1; l <= m; ++l) head *= z / (2.0 * l + 1.0);
    return head * sum;
}

} // namespace

double spherical_jn(int m, double z) {
    if (m < 0) throw InputError("spherical_jn: m must be >= 0");
    if (z < 0.0) throw InputError("spherical_jn: z must be >= 0");
    if (z == 0.0) return m == 0 ? 1.0 : 0.0;
    if (z * z < 0.5 * (2.0 * m + 3.0)) return jn_series(m, z);
    if (m == 0) return std::sin(z) / z;

    if (m <= static_cast<int>(z)) {
        // upward recurrence j_(n+1) = (2n+1)/z j_n - j_(n-1), stable for n < z
        double jm1 = std::sin(z) / z;
        double j0 = (std::sin(z) / z - std::cos(z)) / z;
        for (int n = 1; n < m; ++n) {
            const double jp = (2.0 * n + 1.0) / z * j0 - jm1;
            jm1 = j0;
            j0 = jp;
        }
        return j0;
    }

    // downward Miller recurrence from a start order well above m
    const int start = m + 16 + static_cast<int>(2.0 * std::sqrt(m + 1.0) + z);
    double jp = 0.0;
    double jc = 1e-300;
    double target = 0.0;
    for (int n = start; n >= 1; --n) {
        const double jm = (2.0 * n + 1.0) / z * jc - jp;
        jp = jc;
        jc = jm;
        if (n - 1 == m) target = jc;
        if (std::fabs(jc) > 1e250) { // renormalize to avoid overflow
            jp /= 1e250;
            jc /= 1e250;
            target /= 1e250;
        }
    }
    return target * (std::sin(z) / z) / jc;
}

void riccati_psi(int m, double z, double& psi, double& dpsi) {
    if (z == 0.0) {
        psi = 0.0;
        dpsi = m == 0 ? 1.0 : 0.0;
        return;
    }
    const double jm = spherical_jn(m, z);
    psi = z * jm;
    if (m == 0) {
        dpsi = std::cos(z);
    } else {
        // psi_m' = psi_(m-1) - (m/z) psi_m
        dpsi = z * spherical_jn(m - 1, z) - m * jm;
    }
}

double double_factorial_odd(int m) {
    double out = 1.0;
    for (int j = 3; j <= 2 * m + 1; j += 2) out *= j;
    return out;
}

RiccatiRegular riccati_bessel_regular(int m, double k, double eta) {
    if (m < 0) throw InputError("riccati_bessel_regular: m must be >= 0");
    if (!(k > 0.0)) throw InputError("riccati_bessel_regular: k must be > 0");
    if (eta < 0.0) throw InputError("riccati_bessel_regular: eta must be >= 0");

    RiccatiRegular out;
    const double z = k * eta;

    // small-argument normalized series avoids the (2m+1)!! cancellation and
    // reproduces the eta^(m+1) normalization exactly:
    //   X = eta^(m+1) S(w), w = (k eta)^2, S = sum c_i w^i
    if (z * z < 0.5 * (2.0 * m + 3.0)) {
        const double w = z * z;
        double coef = 1.0;            // c_i
        double wpow = 1.0;            // w^i
        double s = 1.0, ds = 0.0;     // S(w) and dS/dw
        for (int i = 0; i < 200; ++i) {
            coef *= -0.5 / ((i + 1.0) * (2.0 * m + 2.0 * i + 3.0));
            ds += (i + 1.0) * coef * wpow;
            wpow *= w;
            const double term = coef * wpow;
            s += term;
            if (std::fabs(term) < 1e-18 * std::fabs(s)) break;
        }
        const double log_head = (m + 1.0) * std::log(eta);
        if (std::fabs(log_head) < 650.0) {
            const double head = std::pow(eta, m);
            out.value = head * eta * s;
            out.slope = head * ((m + 1.0) * s + 2.0 * k * k * eta * eta * ds);
            out.mantissa_value = out.value;
            out.mantissa_slope = out.slope;
        } else {
            // eta^(m+1) leaves double range: report mantissa * 10^exponent
            out.scaled = true;
            const double log10_head = log_head / std::log(10.0);
            out.exponent10 = static_cast<int>(std::floor(log10_head));
            const double rem = std::pow(10.0, log10_head - out.exponent10);
            out.mantissa_value = rem * s;
            out.mantissa_slope = rem / eta * ((m + 1.0) * s + 2.0 * k * k * eta * eta * ds);
            out.value = out.mantissa_value * std::pow(10.0, out.exponent10);
            out.slope = out.mantissa_slope * std::pow(10.0, out.exponent10);
        }
        return out;
    }

    double psi, dpsi;
    riccati_psi(m, z, psi, dpsi);

    // log of the normalization (2m+1)!! / k^(m+1):
    // ln (2m+1)!! = lgamma(2m+2) - m ln 2 - lgamma(m+1)
    const double log_scale = std::lgamma(2.0 * m + 2.0) - m * std::log(2.0) -
                             std::lgamma(m + 1.0) - (m + 1.0) * std::log(k);
    if (std::fabs(log_scale) < 650.0) {
        const double scale = std::exp(log_scale);
        out.value = scale * psi;
        out.slope = scale * k * dpsi;
        out.mantissa_value = out.value;
        out.mantissa_slope = out.slope;
        return out;
    }

    out.scaled = true;
    const double log10_scale = log_scale / std::log(10.0);
    out.exponent10 = static_cast<int>(std::floor(log10_scale));
    const double rem = std::pow(10.0, log10_scale - out.exponent10);
    out.mantissa_value = rem * psi;
    out.mantissa_slope = rem * k * dpsi;
    out.value = out.mantissa_value * std::pow(10.0, out.exponent10); // may be inf/0
    out.slope = out.mantissa_slope * std::pow(10.0, out.exponent10);
    return out;
}

double constant_index_wronskian(double n_c0, double n_b0, int m, double k) {
    if (!(n_c0 > 0.0) || !(n_b0 > 0.0))
        throw InputError("constant_index_wronskian: indices must be positive");
    if (!(k > 0.0)) throw InputError("constant_index_wronskian: k must be > 0");
    const RiccatiRegular x = riccati_bessel_regular(m, k, std::sqrt(n_c0));
    const RiccatiRegular z = riccati_bessel_regular(m, k, std::sqrt(n_b0));
    return z.value * x.slope - z.slope * x.value;
}

long long harmonic_dimension(int d, int j) {
    if (d < 3) throw InputError("harmonic_dimension: d must be >= 3");
    if (j < 0) throw InputError("harmonic_dimension: j must be >= 0");
    if (j == 0) return 1;
    // N = (2j + d - 2) * C(j+d-3, d-3) / (d-2), an exact integer
    const long long top = 2LL * j + d - 2;
    long long binom = 1;
    for (int i = 1; i <= d - 3; ++i)
        binom = binom * (j + i) / i; // stepwise to stay integral
    const long long num = top * binom;
    return num / (d - 2);
}

double bessel_j(double nu, double z) {
    if (nu < 0.0) throw InputError("bessel_j: order must be >= 0");
    if (!(z > 0.0)) return nu == 0.0 ? 1.0 : 0.0;
    double term = std::exp(nu * std::log(0.5 * z) - std::lgamma(nu + 1.0));
    double sum = term;
    const double q = 0.25 * z * z;
    for (int i = 0; i < 400; ++i) {
        term *= -q / ((i + 1.0) * (nu + i + 1.0));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) && i > 4) break;
    }
    return sum;
}

double first_bessel_zero(double nu) {
    if (nu < 0.0) throw InputError("first_bessel_zero: order must be >= 0");

    // half-integer orders reduce to Riccati-Bessel zeros, which the in-repo
    // psi machinery evaluates more accurately than the raw series
    const double mh = nu - 0.5;
    const bool half_integer = std::fabs(mh - std::round(mh)) < 1e-12 && mh >= -1e-12;
    const int m = half_integer ? static_cast<int>(std::round(mh)) : -1;

    auto f = [&](double z) {
        if (half_integer) {
            double psi, dpsi;
            riccati_psi(m, z, psi, dpsi);
            return psi;
        }
        return bessel_j(nu, z);
    };

    double a = std::max(1e-3, 0.2 * nu);
    double fa = f(a);
    const double step = 0.05 * std::max(1.0, std::cbrt(nu + 1.0));
    for (int i = 0; i < 4000; ++i) {
        const double b = a + step;
        const double fb = f(b);
        if ((fa > 0) != (fb > 0))
            return bisect(f, a, b, 1e-14);
        a = b;
        fa = fb;
    }
    throw NumericalError("first_bessel_zero: no sign change found in scan range");
}

} // namespace itev::oracle
