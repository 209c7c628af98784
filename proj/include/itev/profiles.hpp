#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "itev/taylor.hpp"

namespace itev {

enum class ProfileKind {
    ParametricBump,        // c = 1 + a * exp(1 - 1/(1-(r/rho)^2)) on [0, rho)
    PolynomialWindow,      // c = 1 + a * (1-(r/rho)^2)^q on [0, rho)
    PiecewiseConstantTest, // n = n0 on [0,1]; oracle-only, relaxed invariants
    AnnularTest,           // c = 1 + a * window((r-r0)/w); trapping-study kind
};

std::string to_string(ProfileKind kind);

// A radially symmetric sound speed c(r) with c = 1 outside its support and
// n(r) = c(r)^-2.  All evaluators are closed-form; derivatives come from jet
// propagation through the defining formula, so no sampling error enters the
// Liouville potential.
//
// Profiles are immutable after construction and safe to share across threads.
class RadialProfile {
public:
    static RadialProfile bump(double amplitude, double support_radius);
    static RadialProfile polynomial_window(double amplitude, double support_radius,
                                           int order = 6);
    static RadialProfile constant_index(double n0);
    static RadialProfile annular_test(double amplitude, double center, double width);

    ProfileKind kind() const { return kind_; }

    // families constructed to satisfy the admissibility invariants; the
    // constant-index and annular test kinds are excluded
    bool admissible_family() const {
        return kind_ == ProfileKind::ParametricBump ||
               kind_ == ProfileKind::PolynomialWindow;
    }

    // exact infimum of c over [0,1]
    double sigma() const { return sigma_; }

    // radius past which the perturbation vanishes identically (1.0 for the
    // constant test kind, which never flattens)
    double support_radius() const;

    // radius below which c is identically its value at the origin; the Taylor
    // machinery at r = 0 is exact on this whole interval
    double origin_flat_radius() const;

    Jet c_jet(double r, int order = kMaxJetOrder) const;
    Jet n_jet(double r, int order = kMaxJetOrder) const;    // n = c^-2
    Jet phi_jet(double r, int order = kMaxJetOrder) const;  // sqrt(n) = 1/c
    Jet c2_jet(double r, int order = kMaxJetOrder) const;   // c^2

    double c(double r) const { return c_jet(r, 0).value(); }
    double n(double r) const { return n_jet(r, 0).value(); }
    double c_deriv(double r, int order) const { return c_jet(r, order).deriv(order); }
    double n_deriv(double r, int order) const { return n_jet(r, order).deriv(order); }

    std::string id() const;

    nlohmann::json to_json() const;
    static RadialProfile from_json(const nlohmann::json& doc);
    static RadialProfile load(const std::string& path);

    double param(const std::string& name) const;

private:
    RadialProfile(ProfileKind kind, std::vector<std::pair<std::string, double>> params,
                  double sigma)
        : kind_(kind), params_(std::move(params)), sigma_(sigma) {}

    ProfileKind kind_;
    std::vector<std::pair<std::string, double>> params_;
    double sigma_;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;     // measured quantity, sign convention per check
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::string profile_id;
    std::vector<ValidationCheck> checks;
    bool admissible = false;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

struct ValidationSettings {
    double support_margin = 1e-3;  // fraction of radius treated as boundary band
    double flatness_tol = 1e-10;
    double evenness_tol = 1e-8;
    double index_match_tol = 1e-12;
};

ValidationReport validate(const RadialProfile& profile, int grid,
                          ValidationSettings settings = {});

} // namespace itev
