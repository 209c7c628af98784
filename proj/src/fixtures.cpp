#include "itev/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "itev/errors.hpp"
#include "itev/liouville.hpp"
#include "itev/oracle.hpp"
#include "itev/profiles.hpp"

namespace itev {

namespace {

RadialProfile profile_from_inputs(const nlohmann::json& in) {
    nlohmann::json doc;
    doc["kind"] = in.at("kind");
    nlohmann::json params;
    for (const auto& key : {"amplitude", "support_radius", "n0", "center", "width"})
        if (in.contains(key)) params[key] = in.at(key);
    doc["params"] = params;
    return RadialProfile::from_json(doc);
}

double rel_err(double actual, double expected, double scale) {
    return std::fabs(actual - expected) / std::max({std::fabs(expected), scale, 1e-300});
}

} // namespace

bool FixtureReport::all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const FixtureResult& r) { return r.pass; });
}

double FixtureReport::worst_rel_error() const {
    double worst = 0.0;
    for (const auto& r : results) worst = std::max(worst, r.rel_error);
    return worst;
}

nlohmann::json FixtureReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results)
        arr.push_back({{"op", r.op},
                       {"inputs", r.inputs},
                       {"rel_error", r.rel_error},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    return nlohmann::json{{"all_pass", all_pass()},
                          {"worst_rel_error", worst_rel_error()},
                          {"results", arr}};
}

FixtureReport verify_fixtures(const nlohmann::json& fixtures) {
    FixtureReport report;
    // frames are expensive; cache per profile id
    std::string cached_id;
    LiouvilleFrame frame = LiouvilleFrame::build(RadialProfile::constant_index(1.0));

    auto frame_for = [&](const nlohmann::json& in) -> const LiouvilleFrame& {
        const RadialProfile p = profile_from_inputs(in);
        if (p.id() != cached_id) {
            frame = LiouvilleFrame::build(p);
            cached_id = p.id();
        }
        return frame;
    };

    for (const auto& entry : fixtures) {
        FixtureResult res;
        res.op = entry.at("op").get<std::string>();
        res.inputs = entry.at("inputs");
        res.tolerance = entry.value("tol", 1e-9);
        const auto& in = res.inputs;

        if (res.op == "spherical_jn") {
            const double a = oracle::spherical_jn(in.at("m").get<int>(),
                                                  in.at("z").get<double>());
            res.rel_error = rel_err(a, entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "riccati_psi") {
            double psi, dpsi;
            oracle::riccati_psi(in.at("m").get<int>(), in.at("z").get<double>(), psi, dpsi);
            const double ev = entry.at("expected").at("value").get<double>();
            const double es = entry.at("expected").at("slope").get<double>();
            const double scale = std::max(std::fabs(ev), std::fabs(es));
            res.rel_error = std::max(rel_err(psi, ev, scale), rel_err(dpsi, es, scale));
        } else if (res.op == "riccati_bessel_regular") {
            const auto rr = oracle::riccati_bessel_regular(
                in.at("m").get<int>(), in.at("k").get<double>(), in.at("eta").get<double>());
            const double ev = entry.at("expected").at("value").get<double>();
            const double es = entry.at("expected").at("slope").get<double>();
            const double scale = std::max(std::fabs(ev), std::fabs(es));
            res.rel_error = std::max(rel_err(rr.value, ev, scale),
                                     rel_err(rr.slope, es, scale));
        } else if (res.op == "constant_index_wronskian") {
            const double a = oracle::constant_index_wronskian(
                in.at("n_c0").get<double>(), in.at("n_b0").get<double>(),
                in.at("m").get<int>(), in.at("k").get<double>());
            res.rel_error = rel_err(a, entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "harmonic_dimension") {
            const long long a = oracle::harmonic_dimension(in.at("d").get<int>(),
                                                           in.at("j").get<int>());
            res.rel_error = a == entry.at("expected").get<long long>() ? 0.0 : 1.0;
        } else if (res.op == "first_bessel_zero") {
            const double a = oracle::first_bessel_zero(in.at("order").get<double>());
            res.rel_error = rel_err(a, entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "liouville_endpoint") {
            res.rel_error = rel_err(frame_for(in).endpoint(),
                                    entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "pm_origin_limit") {
            res.rel_error = rel_err(frame_for(in).origin_limit_pm_core(),
                                    entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "pm_value") {
            const LiouvilleFrame& f = frame_for(in);
            const double eta = in.at("eta_over_endpoint").get<double>() * f.endpoint();
            const double a = f.potential(in.at("m").get<int>(), eta);
            res.rel_error = rel_err(a, entry.at("expected").get<double>(), 0.0);
        } else if (res.op == "r_of_eta") {
            const LiouvilleFrame& f = frame_for(in);
            const double eta = in.at("eta_over_endpoint").get<double>() * f.endpoint();
            res.rel_error = rel_err(f.r_of_eta(eta), entry.at("expected").get<double>(), 0.0);
        } else {
            throw InputError("verify_fixtures: unknown op " + res.op);
        }

        res.pass = res.tolerance == 0.0 ? res.rel_error == 0.0
                                        : res.rel_error <= res.tolerance;
        report.results.push_back(std::move(res));
    }
    return report;
}

FixtureReport verify_fixture_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open fixture file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse fixture file " + path + ": " + e.what());
    }
    return verify_fixtures(doc);
}

} // namespace itev
