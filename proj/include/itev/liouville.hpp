#pragma once

#include <array>
#include <memory>

#include "itev/interp.hpp"
#include "itev/profiles.hpp"

namespace itev {

struct FrameConfig {
    int quad_order = 12;       // Gauss-Legendre nodes per panel
    int min_panels = 64;       // starting panel count for the endpoint integral
    int max_panels = 8192;
    double endpoint_tol = 1e-12;     // |C_N - C_2N| <= tol * max(1, C)
    double crossover_factor = 1e-2;  // floor of eta_c as a fraction of C
    int table_size = 8192;           // dense interpolation tables
    double inverse_tol = 1e-13;      // Newton tolerance on eta(r) - eta
};

// The transformed coordinate eta(r) = integral of sqrt(n) from 0 to r, its
// inverse, the endpoint C = eta(1), and a stable evaluator of the potential
//
//   p_m(eta) = n''/(4 n^2) - 5 n'^2/(16 n^3) + m(m+1) (1/(r^2 n) - 1/eta^2)
//
// where primes are d/dr at r = r(eta).  The parenthesized difference has a
// removable singularity at eta = 0; below the crossover eta_c it is evaluated
// from the even Taylor expansion of sqrt(n) at the origin instead of by
// direct subtraction, which would cancel catastrophically.
//
// Frames are immutable after build; all evaluators are const and thread-safe.
class LiouvilleFrame {
public:
    static LiouvilleFrame build(const RadialProfile& profile, FrameConfig cfg = {});

    double endpoint() const { return C_; }          // C = eta(1)
    double endpoint_coarse() const { return C_coarse_; }
    double crossover_eta() const { return eta_c_; }

    double eta_of_r(double r) const;
    double r_of_eta(double eta) const;

    // p_m at eta; eta must lie in [0, C]
    double potential(int m, double eta) const;

    // the two curvature terms of p_m (no centrifugal correction), at radius r
    double curvature_terms(double r) const;

    // 1/(r^2 n) - 1/eta^2, crossover-stabilized
    double singular_core(double eta) const;
    double singular_core_series(double eta) const;  // series path regardless of eta
    double singular_core_direct(double eta) const;  // direct path regardless of eta

    // limit of singular_core at eta -> 0
    double origin_limit_pm_core() const { return origin_limit_; }

    const RadialProfile& profile() const { return *profile_; }

private:
    LiouvilleFrame() = default;

    std::shared_ptr<const RadialProfile> profile_;
    double C_ = 0.0;
    double C_coarse_ = 0.0;
    double eta_c_ = 0.0;
    double origin_limit_ = 0.0;
    std::array<double, 4> phi_even_;  // Taylor coefficients of sqrt(n) at 0: r^0,r^2,r^4,r^6

    HermiteTable eta_table_;    // eta(r) on uniform r grid, slopes = phi
    HermiteTable phi_table_;    // phi(r) = sqrt(n)
    HermiteTable n_table_;      // n(r)
    HermiteTable r_table_;      // r(eta) on uniform eta grid, slopes = 1/phi
};

// spec-facing free functions
LiouvilleFrame build_frame(const RadialProfile& profile, int quad_order = 12);
double potential(const LiouvilleFrame& frame, int m, double eta);

} // namespace itev
