#pragma once

#include <cstdint>
#include <utility>

namespace itev::oracle {

// Spherical Bessel j_m(z), z >= 0.  Upward recurrence for m <~ z, downward
// (Miller) recurrence normalized against j_0 for m >~ z, power series for
// small arguments.
double spherical_jn(int m, double z);

// Riccati-Bessel psi_m(z) = z j_m(z) and its derivative.
void riccati_psi(int m, double z, double& psi, double& dpsi);

// (2m+1)!! as a double (exact through m = 15, correctly rounded beyond)
double double_factorial_odd(int m);

// Normalized regular solution of the p = 0 mode equation:
//   X(eta) = ((2m+1)!!/k^(m+1)) psi_m(k eta),  X'(eta) its eta-derivative.
// When the normalization factor leaves double range the result is reported
// in scaled form value = mantissa * 10^exponent10.
struct RiccatiRegular {
    double value = 0.0;
    double slope = 0.0;
    bool scaled = false;
    double mantissa_value = 0.0;
    double mantissa_slope = 0.0;
    int exponent10 = 0;
};
RiccatiRegular riccati_bessel_regular(int m, double k, double eta);

// d_m(k) for two constant indices: endpoints C = sqrt(n_c0), B = sqrt(n_b0)
double constant_index_wronskian(double n_c0, double n_b0, int m, double k);

// dimension of the space of spherical harmonics of order j in dimension d
long long harmonic_dimension(int d, int j);

// J_nu(z) by power series; adequate for z <= ~25
double bessel_j(double nu, double z);

// first positive zero of J_nu, by bracket scan plus bisection
double first_bessel_zero(double nu);

} // namespace itev::oracle
