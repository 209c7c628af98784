// itev: transmission-eigenvalue toolkit for radially symmetric acoustic
// profiles, with forward-wave and ray-tracing companions.
//
// Exit codes: 0 success, 2 bad input, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "itev/errors.hpp"
#include "itev/fixtures.hpp"
#include "itev/liouville.hpp"
#include "itev/profiles.hpp"
#include "itev/raytrace.hpp"
#include "itev/spectrum.hpp"
#include "itev/tatsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw itev::InputError("cannot open output file: " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& doc) {
    write_text(path, doc.dump(1) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw itev::InputError("cannot create output directory: " + dir.string());
    return dir;
}

struct SpectrumArgs {
    std::string profile_a, profile_b;
    int dimension = 3;
    double k_max = 10.0;
    int m_max = 12;
    double grid_density = 50.0;
    double tol = 1e-10;
    std::string out;
    unsigned workers = 0;

    json echo() const {
        return json{{"command", "spectrum"}, {"a", profile_a}, {"b", profile_b},
                    {"d", dimension}, {"kmax", k_max}, {"mmax", m_max},
                    {"density", grid_density}, {"tol", tol}, {"out", out},
                    {"workers", workers}};
    }
};

int run_spectrum(const SpectrumArgs& args) {
    const itev::RadialProfile pa = itev::RadialProfile::load(args.profile_a);
    const itev::RadialProfile pb = itev::RadialProfile::load(args.profile_b);
    if (!pa.admissible_family())
        std::cerr << "warning: profile a (" << pa.id()
                  << ") is outside the admissible families\n";
    if (!pb.admissible_family())
        std::cerr << "warning: profile b (" << pb.id()
                  << ") is outside the admissible families\n";

    itev::SpectrumConfig cfg;
    cfg.dimension = args.dimension;
    cfg.k_max = args.k_max;
    cfg.m_max = args.m_max;
    cfg.grid_density = args.grid_density;
    cfg.solver_tol = args.tol;
    cfg.root_tol = args.tol;
    cfg.workers = args.workers;

    const itev::SpectrumReport report = itev::find_spectrum(pa, pb, cfg);
    const itev::ContrastBound bound = itev::contrast_lower_bound(pa, pb, args.dimension);

    const fs::path dir = prepare_out_dir(args.out);
    json doc{{"config", args.echo()},
             {"contrast", bound.to_json()},
             {"report", report.to_json()}};
    write_json(dir / "report.json", doc);
    std::ostringstream csv;
    report.write_csv(csv);
    write_text(dir / "report.csv", csv.str());
    std::cerr << "spectrum: " << report.entries.size() << " eigenvalues, identical_flag="
              << (report.identical_flag ? "true" : "false") << "\n";
    return 0;
}

struct ValidateArgs {
    std::string profile;
    int grid = 256;
    std::string out;

    json echo() const {
        return json{{"command", "validate"}, {"profile", profile}, {"grid", grid},
                    {"out", out}};
    }
};

int run_validate(const ValidateArgs& args) {
    const itev::RadialProfile p = itev::RadialProfile::load(args.profile);
    const itev::ValidationReport report = itev::validate(p, args.grid);
    const fs::path dir = prepare_out_dir(args.out);
    write_json(dir / "report.json", json{{"config", args.echo()},
                                         {"report", report.to_json()}});
    for (const auto& check : report.checks)
        std::cerr << (check.pass ? "pass " : "FAIL ") << check.name
                  << " (margin " << check.margin << ")\n";
    return 0;
}

struct RaytraceArgs {
    std::string profile;
    int dimension = 3;
    int n_rays = 64;
    double t_max = 20.0;
    double tol = 1e-9;
    std::string out;
    unsigned workers = 0;
    bool ray_csv = false;
    unsigned long long seed = 20240901ull;

    json echo() const {
        return json{{"command", "raytrace"}, {"profile", profile}, {"d", dimension},
                    {"rays", n_rays}, {"tmax", t_max}, {"tol", tol}, {"out", out},
                    {"workers", workers}, {"ray_csv", ray_csv}, {"seed", seed}};
    }
};

int run_raytrace(const RaytraceArgs& args) {
    const itev::RadialProfile p = itev::RadialProfile::load(args.profile);
    itev::ScanConfig cfg;
    cfg.n_rays = args.n_rays;
    cfg.t_max = args.t_max;
    cfg.tol = args.tol;
    cfg.workers = args.workers;
    cfg.seed = args.seed;
    const itev::ScanReport report = itev::nontrapping_scan(p, args.dimension, cfg);

    const fs::path dir = prepare_out_dir(args.out);
    write_json(dir / "report.json", json{{"config", args.echo()},
                                         {"report", report.to_json()}});
    if (args.ray_csv) {
        std::ostringstream csv;
        report.write_exit_csv(csv);
        write_text(dir / "rays.csv", csv.str());
    }
    std::cerr << "raytrace: all_exit=" << (report.all_exit ? "true" : "false")
              << " worst_exit_time=" << report.worst_exit_time << " herglotz="
              << (report.herglotz.holds ? "holds" : "violated") << "\n";
    return 0;
}

struct TatArgs {
    std::string profile;
    double source_amplitude = 1.0;
    double source_rho = 0.5;
    int nr_per_unit = 400;
    double t_max = 4.0;
    double r_domain = 0.0;
    std::vector<double> k_values;
    double decay_t1 = 0.0, decay_t2 = 0.0;
    std::string out;
    bool snapshots_csv = false;

    json echo() const {
        return json{{"command", "tat"}, {"profile", profile},
                    {"source_amplitude", source_amplitude}, {"source_rho", source_rho},
                    {"nr", nr_per_unit}, {"tmax", t_max}, {"rdomain", r_domain},
                    {"k", k_values}, {"decay_t1", decay_t1}, {"decay_t2", decay_t2},
                    {"out", out}, {"snapshots_csv", snapshots_csv}};
    }
};

int run_tat(const TatArgs& args) {
    const itev::RadialProfile p = itev::RadialProfile::load(args.profile);
    itev::RadialSource source;
    source.terms = {{args.source_amplitude, args.source_rho}};
    itev::SimConfig cfg;
    cfg.nr_per_unit = args.nr_per_unit;
    cfg.t_max = args.t_max;
    cfg.r_domain = args.r_domain;
    const itev::WaveTrace trace = itev::simulate(p, source, cfg);

    const fs::path dir = prepare_out_dir(args.out);
    json results{{"trace_meta", trace.meta_json()},
                 {"peak_boundary", trace.peak_boundary()}};

    if (args.decay_t2 > args.decay_t1) {
        const itev::DecayFit fit = itev::decay_fit(trace, args.decay_t1, args.decay_t2);
        results["decay"] = json{{"rate", fit.silent ? json(nullptr) : json(fit.rate)},
                                {"quality", fit.quality},
                                {"silent", fit.silent}};
    }

    json ft_results = json::array();
    for (double k : args.k_values) {
        const itev::FourierSnapshot ft = itev::temporal_ft(trace, k);
        const itev::HelmholtzResidual res =
            itev::helmholtz_residual(p, ft, source, k, trace.h);
        ft_results.push_back({{"k", k},
                              {"boundary_re", ft.boundary.real()},
                              {"boundary_im", ft.boundary.imag()},
                              {"decayed", ft.decayed},
                              {"truncation_bound", ft.truncation_bound},
                              {"rel_residual_inhomogeneous", res.rel_inhomogeneous},
                              {"rel_residual_homogeneous_re", res.rel_homogeneous_re},
                              {"points_per_wavelength", res.points_per_wavelength}});
    }
    results["fourier"] = ft_results;

    write_json(dir / "report.json", json{{"config", args.echo()}, {"results", results}});
    {
        std::ostringstream csv;
        trace.write_csv(csv);
        write_text(dir / "trace.csv", csv.str());
    }
    if (args.snapshots_csv) {
        std::ostringstream csv;
        trace.write_snapshots_csv(csv);
        write_text(dir / "snapshots.csv", csv.str());
    }
    std::cerr << "tat: " << trace.steps() << " steps, peak |g| = "
              << trace.peak_boundary() << "\n";
    return 0;
}

struct OracleArgs {
    std::string fixtures;
    std::string out;

    json echo() const {
        return json{{"command", "oracle"}, {"fixtures", fixtures}, {"out", out}};
    }
};

int run_oracle(const OracleArgs& args) {
    const itev::FixtureReport report = itev::verify_fixture_file(args.fixtures);
    const fs::path dir = prepare_out_dir(args.out);
    write_json(dir / "report.json", json{{"config", args.echo()},
                                         {"report", report.to_json()}});
    std::cerr << "oracle: " << report.results.size() << " fixtures, worst rel error "
              << report.worst_rel_error() << "\n";
    if (!report.all_pass())
        throw itev::NumericalError("oracle fixtures exceeded tolerance");
    return 0;
}

template <class T>
void maybe_set(const json& doc, const char* key, T& field) {
    if (doc.contains(key)) field = doc.at(key).get<T>();
}

int run_from_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw itev::InputError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw itev::InputError(std::string("cannot parse config file: ") + e.what());
    }
    const std::string command = doc.value("command", "");
    if (command == "spectrum") {
        SpectrumArgs a;
        maybe_set(doc, "a", a.profile_a);
        maybe_set(doc, "b", a.profile_b);
        maybe_set(doc, "d", a.dimension);
        maybe_set(doc, "kmax", a.k_max);
        maybe_set(doc, "mmax", a.m_max);
        maybe_set(doc, "density", a.grid_density);
        maybe_set(doc, "tol", a.tol);
        maybe_set(doc, "out", a.out);
        maybe_set(doc, "workers", a.workers);
        return run_spectrum(a);
    }
    if (command == "validate") {
        ValidateArgs a;
        maybe_set(doc, "profile", a.profile);
        maybe_set(doc, "grid", a.grid);
        maybe_set(doc, "out", a.out);
        return run_validate(a);
    }
    if (command == "raytrace") {
        RaytraceArgs a;
        maybe_set(doc, "profile", a.profile);
        maybe_set(doc, "d", a.dimension);
        maybe_set(doc, "rays", a.n_rays);
        maybe_set(doc, "tmax", a.t_max);
        maybe_set(doc, "tol", a.tol);
        maybe_set(doc, "out", a.out);
        maybe_set(doc, "workers", a.workers);
        maybe_set(doc, "ray_csv", a.ray_csv);
        maybe_set(doc, "seed", a.seed);
        return run_raytrace(a);
    }
    if (command == "tat") {
        TatArgs a;
        maybe_set(doc, "profile", a.profile);
        maybe_set(doc, "source_amplitude", a.source_amplitude);
        maybe_set(doc, "source_rho", a.source_rho);
        maybe_set(doc, "nr", a.nr_per_unit);
        maybe_set(doc, "tmax", a.t_max);
        maybe_set(doc, "rdomain", a.r_domain);
        maybe_set(doc, "k", a.k_values);
        maybe_set(doc, "decay_t1", a.decay_t1);
        maybe_set(doc, "decay_t2", a.decay_t2);
        maybe_set(doc, "out", a.out);
        maybe_set(doc, "snapshots_csv", a.snapshots_csv);
        return run_tat(a);
    }
    if (command == "oracle") {
        OracleArgs a;
        maybe_set(doc, "fixtures", a.fixtures);
        maybe_set(doc, "out", a.out);
        return run_oracle(a);
    }
    throw itev::InputError("config file: unknown command '" + command + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission-eigenvalue toolkit for radial acoustic profiles"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "run from a JSON config instead of flags");

    SpectrumArgs sa;
    CLI::App* spectrum = app.add_subcommand("spectrum",
                                            "transmission spectrum of a profile pair");
    spectrum->add_option("--a", sa.profile_a, "profile JSON for c")->required();
    spectrum->add_option("--b", sa.profile_b, "profile JSON for b")->required();
    spectrum->add_option("--d", sa.dimension, "odd dimension >= 3");
    spectrum->add_option("--kmax", sa.k_max, "wavenumber search bound");
    spectrum->add_option("--mmax", sa.m_max, "largest mode order");
    spectrum->add_option("--density", sa.grid_density, "grid points per unit k");
    spectrum->add_option("--tol", sa.tol, "solver and root tolerance");
    spectrum->add_option("--out", sa.out, "output directory");
    spectrum->add_option("--workers", sa.workers, "worker threads (0 = auto)");

    ValidateArgs va;
    CLI::App* validate = app.add_subcommand("validate", "check profile admissibility");
    validate->add_option("--profile", va.profile, "profile JSON")->required();
    validate->add_option("--grid", va.grid, "sample count");
    validate->add_option("--out", va.out, "output directory");

    RaytraceArgs ra;
    CLI::App* raytrace = app.add_subcommand("raytrace", "non-trapping ray scan");
    raytrace->add_option("--profile", ra.profile, "profile JSON")->required();
    raytrace->add_option("--d", ra.dimension, "dimension");
    raytrace->add_option("--rays", ra.n_rays, "number of rays");
    raytrace->add_option("--tmax", ra.t_max, "integration horizon");
    raytrace->add_option("--tol", ra.tol, "integrator tolerance");
    raytrace->add_option("--out", ra.out, "output directory");
    raytrace->add_option("--workers", ra.workers, "worker threads (0 = auto)");
    raytrace->add_flag("--ray-csv", ra.ray_csv, "write per-ray exit times");
    raytrace->add_option("--seed", ra.seed, "sampling seed");

    TatArgs ta;
    CLI::App* tat = app.add_subcommand("tat", "forward wave run with Fourier checks");
    tat->add_option("--profile", ta.profile, "profile JSON")->required();
    tat->add_option("--source-amplitude", ta.source_amplitude, "initial pressure peak");
    tat->add_option("--source-rho", ta.source_rho, "initial pressure support radius");
    tat->add_option("--nr", ta.nr_per_unit, "grid points per unit radius");
    tat->add_option("--tmax", ta.t_max, "simulated time");
    tat->add_option("--rdomain", ta.r_domain, "domain radius (0 = outrun)");
    tat->add_option("--k", ta.k_values, "wavenumbers for the temporal transform");
    tat->add_option("--decay-t1", ta.decay_t1, "decay fit window start");
    tat->add_option("--decay-t2", ta.decay_t2, "decay fit window end");
    tat->add_option("--out", ta.out, "output directory");
    tat->add_flag("--snapshots-csv", ta.snapshots_csv, "write snapshot matrix");

    OracleArgs oa;
    CLI::App* oracle = app.add_subcommand("oracle", "verify the reference fixture file");
    oracle->add_option("--fixtures", oa.fixtures, "fixture JSON")->required();
    oracle->add_option("--out", oa.out, "output directory");

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) return run_from_config(config_path);
        if (spectrum->parsed()) return run_spectrum(sa);
        if (validate->parsed()) return run_validate(va);
        if (raytrace->parsed()) return run_raytrace(ra);
        if (tat->parsed()) return run_tat(ta);
        if (oracle->parsed()) return run_oracle(oa);
        std::cerr << app.help() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    } catch (const itev::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const itev::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
