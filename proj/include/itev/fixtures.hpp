#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace itev {

// One verified reference value from the frozen fixture file.
struct FixtureResult {
    std::string op;
    nlohmann::json inputs;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct FixtureReport {
    std::vector<FixtureResult> results;
    bool all_pass() const;
    double worst_rel_error() const;
    nlohmann::json to_json() const;
};

// Evaluate every fixture entry with the in-repo implementations and compare
// against the stored extended-precision values.
FixtureReport verify_fixtures(const nlohmann::json& fixtures);
FixtureReport verify_fixture_file(const std::string& path);

} // namespace itev
