#include "itev/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "itev/errors.hpp"

namespace itev {

namespace {

// smooth window exp(1 - 1/(1-u^2)) for |u| < 1, zero outside; u is a jet
Jet smooth_window(const Jet& u) {
    const double u0 = u.value();
    if (u0 * u0 >= 1.0) return Jet(0.0, u.ord);
    const Jet den = 1.0 - u * u;
    // underflow of exp past ~ -745 flushes the whole jet to zero, matching
    // the identically-zero branch outside the support
    return exp(1.0 - reciprocal(den));
}

Jet poly_window(const Jet& u, int q) {
    const double u0 = u.value();
    if (u0 * u0 >= 1.0) return Jet(0.0, u.ord);
    return pow_int(1.0 - u * u, q);
}

double get_param(const std::vector<std::pair<std::string, double>>& params,
                 const std::string& name) {
    for (const auto& [key, value] : params)
        if (key == name) return value;
    throw InputError("profile parameter not found: " + name);
}

} // namespace

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::ParametricBump: return "parametric-bump";
        case ProfileKind::PolynomialWindow: return "polynomial-window";
        case ProfileKind::PiecewiseConstantTest: return "piecewise-constant-test";
        case ProfileKind::AnnularTest: return "annular-test";
    }
    return "unknown";
}

RadialProfile RadialProfile::bump(double amplitude, double support_radius) {
    if (amplitude <= -1.0)
        throw InputError("bump profile: amplitude must exceed -1 (speed would vanish)");
    if (!(support_radius > 0.0 && support_radius < 1.0))
        throw InputError("bump profile: support radius must lie in (0,1)");
    const double sigma = std::min(1.0, 1.0 + amplitude); // window peaks at 1
    return RadialProfile(ProfileKind::ParametricBump,
                         {{"amplitude", amplitude}, {"support_radius", support_radius}},
                         sigma);
}

RadialProfile RadialProfile::polynomial_window(double amplitude, double support_radius,
                                               int order) {
    if (amplitude <= -1.0)
        throw InputError("polynomial window profile: amplitude must exceed -1");
    if (!(support_radius > 0.0 && support_radius < 1.0))
        throw InputError("polynomial window profile: support radius must lie in (0,1)");
    if (order < 5)
        throw InputError("polynomial window profile: order must be >= 5 so the "
                         "exposed derivatives vanish at the support edge");
    const double sigma = std::min(1.0, 1.0 + amplitude);
    return RadialProfile(ProfileKind::PolynomialWindow,
                         {{"amplitude", amplitude},
                          {"support_radius", support_radius},
                          {"order", static_cast<double>(order)}},
                         sigma);
}

RadialProfile RadialProfile::constant_index(double n0) {
    if (!(n0 > 0.0))
        throw InputError("constant test index: n0 must be positive");
    return RadialProfile(ProfileKind::PiecewiseConstantTest, {{"n0", n0}},
                         1.0 / std::sqrt(n0));
}

RadialProfile RadialProfile::annular_test(double amplitude, double center, double width) {
    if (amplitude <= -1.0)
        throw InputError("annular test speed: amplitude must exceed -1");
    if (!(width > 0.0 && center - width > 0.0 && center + width < 1.0))
        throw InputError("annular test speed: annulus (center-width, center+width) "
                         "must lie inside (0,1)");
    const double sigma = std::min(1.0, 1.0 + amplitude);
    return RadialProfile(ProfileKind::AnnularTest,
                         {{"amplitude", amplitude}, {"center", center}, {"width", width}},
                         sigma);
}

double RadialProfile::support_radius() const {
    switch (kind_) {
        case ProfileKind::ParametricBump:
        case ProfileKind::PolynomialWindow:
            return get_param(params_, "support_radius");
        case ProfileKind::PiecewiseConstantTest:
            return 1.0;
        case ProfileKind::AnnularTest:
            return get_param(params_, "center") + get_param(params_, "width");
    }
    return 1.0;
}

double RadialProfile::origin_flat_radius() const {
    switch (kind_) {
        case ProfileKind::ParametricBump:
        case ProfileKind::PolynomialWindow:
            return 0.0;
        case ProfileKind::PiecewiseConstantTest:
            return 1.0;
        case ProfileKind::AnnularTest:
            return get_param(params_, "center") - get_param(params_, "width");
    }
    return 0.0;
}

double RadialProfile::param(const std::string& name) const {
    return get_param(params_, name);
}

Jet RadialProfile::c_jet(double r, int order) const {
    const Jet rj = Jet::variable(r, order);
    switch (kind_) {
        case ProfileKind::ParametricBump: {
            const double a = get_param(params_, "amplitude");
            const double rho = get_param(params_, "support_radius");
            return 1.0 + a * smooth_window(rj / rho);
        }
        case ProfileKind::PolynomialWindow: {
            const double a = get_param(params_, "amplitude");
            const double rho = get_param(params_, "support_radius");
            const int q = static_cast<int>(get_param(params_, "order"));
            return 1.0 + a * poly_window(rj / rho, q);
        }
        case ProfileKind::PiecewiseConstantTest: {
            const double n0 = get_param(params_, "n0");
            return Jet(1.0 / std::sqrt(n0), order);
        }
        case ProfileKind::AnnularTest: {
            const double a = get_param(params_, "amplitude");
            const double r0 = get_param(params_, "center");
            const double w = get_param(params_, "width");
            return 1.0 + a * smooth_window((rj - r0) / w);
        }
    }
    return Jet(1.0, order);
}

Jet RadialProfile::n_jet(double r, int order) const {
    const Jet inv_c = reciprocal(c_jet(r, order));
    return inv_c * inv_c;
}

Jet RadialProfile::phi_jet(double r, int order) const {
    return reciprocal(c_jet(r, order));
}

Jet RadialProfile::c2_jet(double r, int order) const {
    const Jet cj = c_jet(r, order);
    return cj * cj;
}

std::string RadialProfile::id() const {
    std::ostringstream os;
    os << to_string(kind_) << "(";
    bool first = true;
    for (const auto& [key, value] : params_) {
        if (!first) os << ",";
        os << key << "=" << value;
        first = false;
    }
    os << ")";
    return os.str();
}

nlohmann::json RadialProfile::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : params_) params[key] = value;
    return nlohmann::json{{"kind", to_string(kind_)}, {"params", params}};
}

RadialProfile RadialProfile::from_json(const nlohmann::json& doc) {
    if (!doc.contains("kind") || !doc.contains("params"))
        throw InputError("profile document must have 'kind' and 'params'");
    const std::string kind = doc.at("kind").get<std::string>();
    const auto& p = doc.at("params");
    try {
        if (kind == "parametric-bump")
            return bump(p.at("amplitude").get<double>(),
                        p.at("support_radius").get<double>());
        if (kind == "polynomial-window")
            return polynomial_window(p.at("amplitude").get<double>(),
                                     p.at("support_radius").get<double>(),
                                     p.value("order", 6));
        if (kind == "piecewise-constant-test")
            return constant_index(p.at("n0").get<double>());
        if (kind == "annular-test")
            return annular_test(p.at("amplitude").get<double>(),
                                p.at("center").get<double>(),
                                p.at("width").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("profile document malformed: ") + e.what());
    }
    throw InputError("unknown profile kind: " + kind);
}

RadialProfile RadialProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open profile file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse profile file " + path + ": " + e.what());
    }
    return from_json(doc);
}

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"margin", c.margin},
                       {"tolerance", c.tolerance},
                       {"detail", c.detail}});
    }
    return nlohmann::json{
        {"profile", profile_id}, {"admissible", admissible}, {"checks", arr}};
}

ValidationReport validate(const RadialProfile& profile, int grid,
                          ValidationSettings settings) {
    if (grid < 16) throw InputError("validate: grid must be >= 16");

    ValidationReport report;
    report.profile_id = profile.id();

    // positivity margin: min c over the sample grid (closed-form sigma is the
    // exact infimum; the grid scan cross-checks it)
    {
        double cmin = profile.sigma();
        for (int i = 0; i <= grid; ++i) {
            const double r = static_cast<double>(i) / grid;
            cmin = std::min(cmin, profile.c(r));
        }
        report.checks.push_back({"positivity", cmin > 0.0, cmin, 0.0,
                                 "min c(r) over [0,1]"});
    }

    // boundary flatness: |c-1|, |c'|, |c''| in the band [1-eps, 1]
    {
        double worst = 0.0;
        const double band = settings.support_margin;
        for (int i = 0; i <= 16; ++i) {
            const double r = 1.0 - band + band * static_cast<double>(i) / 16.0;
            const Jet cj = profile.c_jet(r, 2);
            worst = std::max({worst, std::fabs(cj.value() - 1.0),
                              std::fabs(cj.deriv(1)), std::fabs(cj.deriv(2))});
        }
        report.checks.push_back({"boundary_flatness", worst <= settings.flatness_tol,
                                 worst, settings.flatness_tol,
                                 "max of |c-1|, |c'|, |c''| near r = 1"});
    }

    // origin evenness: one-sided finite-difference estimates of the odd
    // derivatives c'(0) and c'''(0) from samples on [0, 4h]
    {
        const double h = 1e-3;
        const double c0 = profile.c(0.0);
        const double c1 = profile.c(h);
        const double c2 = profile.c(2 * h);
        const double c3 = profile.c(3 * h);
        const double c4 = profile.c(4 * h);
        const double d1 = (-3 * c0 + 4 * c1 - c2) / (2 * h);
        const double d3 = (-5 * c0 + 18 * c1 - 24 * c2 + 14 * c3 - 3 * c4)
                          / (2 * h * h * h);
        const double worst = std::max(std::fabs(d1), std::fabs(d3) * h * h);
        report.checks.push_back({"origin_evenness", worst <= settings.evenness_tol,
                                 worst, settings.evenness_tol,
                                 "one-sided FD estimate of odd derivatives at r = 0"});
    }

    // endpoint index conditions n(1) = 1 and n'(1) = 0
    {
        const Jet nj = profile.n_jet(1.0, 1);
        const double worst = std::max(std::fabs(nj.value() - 1.0),
                                      std::fabs(nj.deriv(1)));
        report.checks.push_back({"endpoint_index", worst <= settings.flatness_tol,
                                 worst, settings.flatness_tol,
                                 "max of |n(1)-1|, |n'(1)|"});
    }

    // n(r) c(r)^2 = 1 consistency at grid points
    {
        double worst = 0.0;
        for (int i = 0; i <= grid; ++i) {
            const double r = static_cast<double>(i) / grid;
            const double cv = profile.c(r);
            worst = std::max(worst, std::fabs(profile.n(r) * cv * cv - 1.0));
        }
        report.checks.push_back({"index_consistency", worst <= settings.index_match_tol,
                                 worst, settings.index_match_tol, "max |n c^2 - 1|"});
    }

    report.admissible = profile.admissible_family() && report.all_pass();
    return report;
}

} // namespace itev
