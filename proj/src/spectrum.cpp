#include "itev/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "itev/errors.hpp"
#include "itev/oracle.hpp"
#include "itev/parallel.hpp"
#include "itev/rootfind.hpp"

namespace itev {

double wronskian(const LiouvilleFrame& frame_c, const LiouvilleFrame& frame_b,
                 int m, double k, double tol) {
    const ModeEndpointData x = solve_regular(frame_c, m, k, tol);
    const ModeEndpointData z = solve_regular(frame_b, m, k, tol);
    return z.value_at_end * x.slope_at_end - z.slope_at_end * x.value_at_end;
}

namespace {

struct GridAnalysis {
    std::vector<SpectrumEntry> roots;
    std::vector<SuspectedZero> suspected;
};

// Bracket sign changes of tabulated values and polish with Brent.  Exact
// zeros at grid points are claimed by the interval on their left so they are
// reported once.  Grid points where |f| dips four decades below the local
// scale without changing sign are flagged as suspected even-order zeros.
GridAnalysis analyze_grid(const std::vector<double>& ks, const std::vector<double>& vals,
                          const std::function<double(double)>& fn, double root_tol) {
    GridAnalysis out;
    const std::size_t n = ks.size();
    std::vector<char> near_bracket(n, 0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double fa = vals[i], fb = vals[i + 1];
        const bool strict_change = (fa > 0 && fb < 0) || (fa < 0 && fb > 0);
        const bool exact_right = fb == 0.0;
        if (!strict_change && !exact_right) continue;
        near_bracket[i] = near_bracket[i + 1] = 1;
        SpectrumEntry entry;
        entry.bracket_lo = ks[i];
        entry.bracket_hi = ks[i + 1];
        if (exact_right) {
            entry.k = ks[i + 1];
            entry.residual = 0.0;
            if (i + 2 < n) near_bracket[i + 2] = 1;
        } else if (fa == 0.0) {
            continue; // claimed by the interval to the left (or k = 0)
        } else {
            const RootResult root = brent(fn, ks[i], ks[i + 1], fa, fb, root_tol);
            entry.k = root.x;
            entry.residual = std::fabs(root.f);
            entry.polished = root.converged;
        }
        out.roots.push_back(entry);
    }

    const std::size_t w = 10;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (near_bracket[i]) continue;
        const double v = std::fabs(vals[i]);
        if (v >= std::fabs(vals[i - 1]) || v > std::fabs(vals[i + 1])) continue;
        double local = 0.0;
        const std::size_t lo = i > w ? i - w : 0;
        const std::size_t hi = std::min(i + w, n - 1);
        for (std::size_t j = lo; j <= hi; ++j) local = std::max(local, std::fabs(vals[j]));
        if (v < 1e-4 * local) out.suspected.push_back({ks[i], 0, v});
    }
    return out;
}

// grid over (0, k_max]: k = 0 is excluded because it is a structural zero of
// d_m for every admissible pair (both equations lose their index at k = 0),
// and solver noise there would fake microscopic brackets
std::vector<double> uniform_grid(double k_max, double grid_density, std::size_t& n) {
    n = static_cast<std::size_t>(std::ceil(k_max * grid_density));
    const double dk = k_max / static_cast<double>(n);
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = i == n - 1 ? k_max : dk * (i + 1);
    return ks;
}

} // namespace

SweepOutcome sweep_zeros(const std::function<double(double)>& fn, double k_max,
                         double grid_density, double root_tol, unsigned workers) {
    if (!(k_max > 0.0)) throw InputError("sweep_zeros: k_max must be > 0");
    if (!(grid_density > 0.0)) throw InputError("sweep_zeros: grid density must be > 0");

    SweepOutcome out;
    std::size_t n = 0;
    const std::vector<double> ks = uniform_grid(k_max, grid_density, n);
    std::vector<double> vals(n);
    parallel_for(n, workers, [&](std::size_t i) { vals[i] = fn(ks[i]); });
    out.grid_values = vals;
    for (double v : vals) out.max_abs = std::max(out.max_abs, std::fabs(v));

    GridAnalysis ga = analyze_grid(ks, vals, fn, root_tol);
    out.roots = std::move(ga.roots);
    out.suspected = std::move(ga.suspected);
    return out;
}

namespace {

std::vector<double> spectrum_of(const LiouvilleFrame& frame, int m, double k_max,
                                double tol, double grid_density, bool neumann) {
    auto fn = [&](double k) {
        const ModeEndpointData d = solve_regular(frame, m, k, tol);
        return neumann ? d.slope_at_end : d.value_at_end;
    };
    const SweepOutcome sweep = sweep_zeros(fn, k_max, grid_density, tol, 1);
    std::vector<double> out;
    for (const auto& e : sweep.roots)
        if (e.k > 0.0) out.push_back(e.k);
    return out;
}

} // namespace

std::vector<double> dirichlet_spectrum(const LiouvilleFrame& frame, int m,
                                       double k_max, double tol, double grid_density) {
    return spectrum_of(frame, m, k_max, tol, grid_density, false);
}

std::vector<double> neumann_spectrum(const LiouvilleFrame& frame, int m,
                                     double k_max, double tol, double grid_density) {
    return spectrum_of(frame, m, k_max, tol, grid_density, true);
}

SpectrumReport find_spectrum(const RadialProfile& profile_c,
                             const RadialProfile& profile_b, SpectrumConfig cfg) {
    if (cfg.dimension < 3 || cfg.dimension % 2 == 0)
        throw InputError("find_spectrum: dimension must be odd and >= 3");
    if (!(cfg.k_max > 0.0)) throw InputError("find_spectrum: k_max must be > 0");
    const int m_lo = (cfg.dimension - 3) / 2;
    if (cfg.m_max < m_lo)
        throw InputError("find_spectrum: m_max must be >= (d-3)/2");

    SpectrumReport report;
    report.profile_c = profile_c.id();
    report.profile_b = profile_b.id();
    report.dimension = cfg.dimension;
    report.k_max = cfg.k_max;
    report.m_max = cfg.m_max;

    const LiouvilleFrame frame_c = LiouvilleFrame::build(profile_c);
    const LiouvilleFrame frame_b = LiouvilleFrame::build(profile_b);

    const int n_modes = cfg.m_max - m_lo + 1;
    std::size_t n_grid = 0;
    const std::vector<double> ks = uniform_grid(cfg.k_max, cfg.grid_density, n_grid);

    // one task per (m, k) grid point; results land in per-index slots so the
    // merged output is identical for every worker count
    struct PointData {
        double d = 0.0;
        double scale = 0.0;
    };
    std::vector<PointData> grid(static_cast<std::size_t>(n_modes) * n_grid);
    parallel_for(grid.size(), cfg.workers, [&](std::size_t idx) {
        const int m = m_lo + static_cast<int>(idx / n_grid);
        const double k = ks[idx % n_grid];
        const ModeEndpointData x = solve_regular(frame_c, m, k, cfg.solver_tol);
        const ModeEndpointData z = solve_regular(frame_b, m, k, cfg.solver_tol);
        grid[idx].d = z.value_at_end * x.slope_at_end - z.slope_at_end * x.value_at_end;
        grid[idx].scale = std::fabs(z.value_at_end * x.slope_at_end) +
                          std::fabs(z.slope_at_end * x.value_at_end);
    });

    for (int mi = 0; mi < n_modes; ++mi) {
        const int m = m_lo + mi;
        std::vector<double> vals(n_grid);
        double max_abs = 0.0, max_scale = 0.0;
        for (std::size_t ki = 0; ki < n_grid; ++ki) {
            vals[ki] = grid[mi * n_grid + ki].d;
            max_abs = std::max(max_abs, std::fabs(vals[ki]));
            max_scale = std::max(max_scale, grid[mi * n_grid + ki].scale);
        }
        // an identically-zero determinant can only be resolved down to the
        // solver noise floor on the endpoint magnitudes
        const double threshold = 1e3 * cfg.solver_tol * std::max(max_scale, 1e-30);
        report.zero_threshold = std::max(report.zero_threshold, threshold);
        if (max_abs <= threshold) {
            report.identical_flag = true;
            report.identically_zero_m.push_back(m);
            continue;
        }

        auto fn = [&](double k) {
            return wronskian(frame_c, frame_b, m, k, cfg.solver_tol);
        };
        GridAnalysis ga = analyze_grid(ks, vals, fn, cfg.root_tol);
        const long long mult = oracle::harmonic_dimension(cfg.dimension, m - m_lo);
        for (auto& e : ga.roots) {
            if (e.k <= 0.0) continue;
            e.m = m;
            e.multiplicity = mult;
            report.entries.push_back(e);
        }
        for (auto& s : ga.suspected) {
            s.m = m;
            report.suspected.push_back(s);
        }
    }

    std::sort(report.entries.begin(), report.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                  if (a.k != b.k) return a.k < b.k;
                  return a.m < b.m;
              });
    std::sort(report.suspected.begin(), report.suspected.end(),
              [](const SuspectedZero& a, const SuspectedZero& b) {
                  if (a.k != b.k) return a.k < b.k;
                  return a.m < b.m;
              });
    return report;
}

std::string to_string(ContrastSign sign) {
    switch (sign) {
        case ContrastSign::NonNegative: return "nonneg";
        case ContrastSign::NonPositive: return "nonpos";
        case ContrastSign::Mixed: return "mixed";
    }
    return "unknown";
}

ContrastBound contrast_lower_bound(const RadialProfile& profile_c,
                                   const RadialProfile& profile_b, int dimension) {
    if (dimension < 3 || dimension % 2 == 0)
        throw InputError("contrast_lower_bound: dimension must be odd and >= 3");

    constexpr int grid = 4096;
    double min_contrast = 0.0, max_contrast = 0.0;
    double sup_nc = 0.0, sup_nb = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double r = static_cast<double>(i) / grid;
        const double nc = profile_c.n(r);
        const double nb = profile_b.n(r);
        min_contrast = std::min(min_contrast, nc - nb);
        max_contrast = std::max(max_contrast, nc - nb);
        sup_nc = std::max(sup_nc, nc);
        sup_nb = std::max(sup_nb, nb);
    }

    ContrastBound out;
    const double nu = 0.5 * dimension - 1.0;
    const double j1 = oracle::first_bessel_zero(nu);
    out.lambda0 = j1 * j1;

    const double tol = 1e-13 * std::max({sup_nc, sup_nb, 1.0});
    if (min_contrast >= -tol) {
        out.sign = ContrastSign::NonNegative;
        out.n_star = sup_nc;
        out.bound = std::sqrt(out.lambda0 / sup_nc);
    } else if (max_contrast <= tol) {
        out.sign = ContrastSign::NonPositive;
        out.n_star = sup_nb;
        out.bound = std::sqrt(out.lambda0 / sup_nb);
    } else {
        out.sign = ContrastSign::Mixed;
    }
    return out;
}

nlohmann::json ContrastBound::to_json() const {
    nlohmann::json doc{{"sign", to_string(sign)},
                       {"n_star", n_star},
                       {"lambda0", lambda0}};
    if (bound) doc["bound"] = *bound;
    else doc["bound"] = nullptr;
    return doc;
}

nlohmann::json SpectrumReport::to_json() const {
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : entries)
        ents.push_back({{"k", e.k},
                        {"m", e.m},
                        {"multiplicity", e.multiplicity},
                        {"bracket_lo", e.bracket_lo},
                        {"bracket_hi", e.bracket_hi},
                        {"residual", e.residual},
                        {"polished", e.polished}});
    nlohmann::json susp = nlohmann::json::array();
    for (const auto& s : suspected)
        susp.push_back({{"k", s.k}, {"m", s.m}, {"value", s.value}});
    return nlohmann::json{{"profile_c", profile_c},
                          {"profile_b", profile_b},
                          {"dimension", dimension},
                          {"k_max", k_max},
                          {"m_max", m_max},
                          {"identical_flag", identical_flag},
                          {"identically_zero_m", identically_zero_m},
                          {"zero_threshold", zero_threshold},
                          {"entries", ents},
                          {"suspected_even_order", susp}};
}

void SpectrumReport::write_csv(std::ostream& os) const {
    os << "k,m,multiplicity,residual\n";
    char buf[128];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%lld,%.17g\n", e.k, e.m,
                      e.multiplicity, e.residual);
        os << buf;
    }
}

} // namespace itev
