#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

const std::string kBin = ITEV_CLI_BIN;
const std::string kData = ITEV_DATA_DIR;
const std::string kFixtures = ITEV_FIXTURE_DIR;

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "itev_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("spectrum command: constant pair reproduces the sine zeros") {
    const fs::path out = scratch("spectrum_const");
    const int rc = run("spectrum --a " + kData + "/profiles/const4.json --b " + kData +
                       "/profiles/const1.json --d 3 --kmax 10 --mmax 0 --out " +
                       out.string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    const auto& entries = doc.at("report").at("entries");
    REQUIRE(entries.size() == 3);
    CHECK(std::fabs(entries[0].at("k").get<double>() - M_PI) < 1e-6);
    CHECK(std::fabs(entries[1].at("k").get<double>() - 2 * M_PI) < 1e-6);
    CHECK(std::fabs(entries[2].at("k").get<double>() - 3 * M_PI) < 1e-6);
    // config echo carries the resolved defaults
    CHECK(doc.at("config").at("density").get<double>() == 50.0);
    const std::string csv = slurp(out / "report.csv");
    CHECK(csv.find("k,m,multiplicity,residual") == 0);
}

TEST_CASE("spectrum command: identical pair sets the flag") {
    const fs::path out = scratch("spectrum_same");
    const int rc = run("spectrum --a " + kData + "/profiles/bump03.json --b " + kData +
                       "/profiles/bump03.json --d 3 --kmax 4 --mmax 2 --out " +
                       out.string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("report").at("identical_flag").get<bool>());
    CHECK(doc.at("report").at("entries").empty());
}

TEST_CASE("spectrum command: missing profile file exits 2") {
    const fs::path out = scratch("spectrum_missing");
    const int rc = run("spectrum --a /nonexistent.json --b " + kData +
                       "/profiles/const1.json --out " + out.string());
    CHECK(rc == 2);
}

TEST_CASE("byte-identical reports for any worker count") {
    const fs::path out1 = scratch("det_w1");
    const fs::path out4 = scratch("det_w4");
    const std::string common = "spectrum --a " + kData + "/profiles/const4.json --b " +
                               kData + "/profiles/const1.json --d 3 --kmax 6 --mmax 3";
    CHECK(run(common + " --workers 1 --out " + out1.string()) == 0);
    CHECK(run(common + " --workers 4 --out " + out4.string()) == 0);
    CHECK(slurp(out1 / "report.csv") == slurp(out4 / "report.csv"));
    // report.json differs only in the echoed worker count
    json a = json::parse(slurp(out1 / "report.json"));
    json b = json::parse(slurp(out4 / "report.json"));
    a["config"].erase("workers");
    b["config"].erase("workers");
    CHECK(a == b);
}

TEST_CASE("repeated runs are byte-identical") {
    const fs::path out1 = scratch("rep_1");
    const fs::path out2 = scratch("rep_2");
    const std::string common = "spectrum --a " + kData + "/profiles/bump03.json --b " +
                               kData + "/profiles/bump_flat.json --d 3 --kmax 3 "
                               "--mmax 2 --workers 3";
    CHECK(run(common + " --out " + out1.string()) == 0);
    CHECK(run(common + " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
    CHECK(slurp(out1 / "report.csv") == slurp(out2 / "report.csv"));
}

TEST_CASE("validate command") {
    const fs::path out = scratch("validate");
    CHECK(run("validate --profile " + kData + "/profiles/bump03.json --out " +
              out.string()) == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("report").at("admissible").get<bool>());

    const fs::path out2 = scratch("validate_const");
    CHECK(run("validate --profile " + kData + "/profiles/const4.json --out " +
              out2.string()) == 0);
    const json doc2 = json::parse(slurp(out2 / "report.json"));
    CHECK_FALSE(doc2.at("report").at("admissible").get<bool>());
}

TEST_CASE("raytrace command") {
    const fs::path out = scratch("raytrace");
    const int rc = run("raytrace --profile " + kData + "/profiles/bump03.json "
                       "--rays 16 --tmax 10 --tol 1e-8 --ray-csv --out " + out.string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("report").at("all_exit").get<bool>());
    CHECK(doc.at("report").at("herglotz").at("holds").get<bool>());
    CHECK(fs::exists(out / "rays.csv"));
}

TEST_CASE("tat command with decay window and transforms") {
    const fs::path out = scratch("tat");
    const int rc = run("tat --profile " + kData + "/profiles/bump_flat.json "
                       "--nr 150 --tmax 4 --k 2 --decay-t1 2.5 --decay-t2 4 --out " +
                       out.string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("results").at("fourier").size() == 1);
    CHECK(doc.at("results").at("fourier")[0].at("rel_residual_inhomogeneous")
              .get<double>() < 0.05);
    CHECK(fs::exists(out / "trace.csv"));
}

TEST_CASE("oracle command verifies the fixture file") {
    const fs::path out = scratch("oracle");
    const int rc = run("oracle --fixtures " + kFixtures + "/oracle_fixtures.json "
                       "--out " + out.string());
    CHECK(rc == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("report").at("all_pass").get<bool>());
}

TEST_CASE("config file drives a full run") {
    const fs::path out = scratch("config_run");
    const fs::path cfg_path = out / "run.json";
    {
        json cfg{{"command", "spectrum"},
                 {"a", kData + "/profiles/const4.json"},
                 {"b", kData + "/profiles/const1.json"},
                 {"kmax", 7.0},
                 {"mmax", 0},
                 {"out", out.string()}};
        std::ofstream f(cfg_path);
        f << cfg.dump();
    }
    CHECK(run("--config " + cfg_path.string()) == 0);
    const json doc = json::parse(slurp(out / "report.json"));
    CHECK(doc.at("report").at("entries").size() == 2);
}

TEST_CASE("unknown config command exits 2") {
    const fs::path out = scratch("config_bad");
    const fs::path cfg_path = out / "run.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"command": "frobnicate"})";
    }
    CHECK(run("--config " + cfg_path.string()) == 2);
}

TEST_SUITE_END();
