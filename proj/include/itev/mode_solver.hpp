#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "itev/liouville.hpp"

namespace itev {

// Endpoint Cauchy data of the normalized regular solution: the unique
// solution of
//
//   -X'' + (m(m+1)/eta^2 + p_m(eta)) X = k^2 X
//
// with eta^-(m+1) X(eta) -> 1 at the regular singular point eta = 0.
struct ModeEndpointData {
    int m = 0;
    double k = 0.0;
    double value_at_end = 0.0;  // X(C, k)
    double slope_at_end = 0.0;  // X'(C, k)
    double est_error = 0.0;     // series truncation + accumulated step estimates
    double handoff = 0.0;       // series/integrator handoff radius actually used
    std::size_t n_steps = 0;
};

struct ModeSolution {
    ModeEndpointData end;
    // uniform sample grid on [handoff, C]; empty unless samples requested
    std::vector<double> eta;
    std::vector<double> value;
    std::vector<double> slope;
};

struct SolveOptions {
    double tol = 1e-10;     // must lie in [1e-13, 1e-6]
    int series_order = 8;   // Frobenius truncation order
    double handoff = 0.0;   // 0 = automatic min(1e-2 C, tol^(1/(s+1)))
    int n_samples = 0;
};

// Truncated Frobenius expansion X = eta^(m+1) (1 + a2 eta^2 + ...) about 0,
// with k^2 - p_m treated as a local degree-4 polynomial.
struct FrobeniusSeries {
    int m = 0;
    double delta = 0.0;               // validity radius used for the fit
    std::vector<double> coeffs;       // a_0 .. a_s
    std::array<double, 5> q{};        // fitted p_m(eta) - k^2 coefficients

    void eval(double eta, double& value, double& slope) const;
};

FrobeniusSeries frobenius_startup(const LiouvilleFrame& frame, int m, double k,
                                  double delta, int series_order);

ModeEndpointData solve_regular(const LiouvilleFrame& frame, int m, double k,
                               double tol = 1e-10);
ModeSolution solve_regular_sampled(const LiouvilleFrame& frame, int m, double k,
                                   SolveOptions opts);

// max finite-difference residual of the mode equation over interior sample
// points; test-suite instrumentation, not the hot path
double residual_check(const LiouvilleFrame& frame, int m, double k,
                      const ModeSolution& solution);

} // namespace itev
