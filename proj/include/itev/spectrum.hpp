#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "itev/liouville.hpp"
#include "itev/mode_solver.hpp"

namespace itev {

// d_m(k) = Z_m1(B,k) X_m1'(C,k) - Z_m1'(B,k) X_m1(C,k); its zeros over m are
// the transmission eigenvalues of the pair.
double wronskian(const LiouvilleFrame& frame_c, const LiouvilleFrame& frame_b,
                 int m, double k, double tol = 1e-10);

struct SpectrumConfig {
    int dimension = 3;        // odd, >= 3
    double k_max = 10.0;
    int m_max = 12;
    double grid_density = 50.0;  // samples per unit k
    double solver_tol = 1e-10;
    double root_tol = 1e-10;
    unsigned workers = 0;        // 0 = hardware concurrency
};

struct SpectrumEntry {
    double k = 0.0;            // polished eigenvalue
    int m = 0;
    long long multiplicity = 1;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;     // |d_m(k)|
    bool polished = true;      // false when the bracket polish stagnated
};

struct SuspectedZero {
    double k = 0.0;
    int m = 0;
    double value = 0.0;        // |d_m| at the dip
};

struct SpectrumReport {
    std::string profile_c;
    std::string profile_b;
    int dimension = 3;
    double k_max = 0.0;
    int m_max = 0;
    std::vector<SpectrumEntry> entries;           // sorted by k, ties by m
    std::vector<SuspectedZero> suspected;         // dips without sign change
    bool identical_flag = false;
    std::vector<int> identically_zero_m;
    double zero_threshold = 0.0;

    nlohmann::json to_json() const;
    void write_csv(std::ostream& os) const;
};

SpectrumReport find_spectrum(const RadialProfile& profile_c,
                             const RadialProfile& profile_b, SpectrumConfig cfg);

// zeros of k -> X_m1(C,k) resp. X_m1'(C,k) on (0, k_max]
std::vector<double> dirichlet_spectrum(const LiouvilleFrame& frame, int m,
                                       double k_max, double tol = 1e-10,
                                       double grid_density = 50.0);
std::vector<double> neumann_spectrum(const LiouvilleFrame& frame, int m,
                                     double k_max, double tol = 1e-10,
                                     double grid_density = 50.0);

enum class ContrastSign { NonNegative, NonPositive, Mixed };

std::string to_string(ContrastSign sign);

struct ContrastBound {
    ContrastSign sign = ContrastSign::Mixed;
    std::optional<double> bound;   // sqrt(lambda0 / n_star) when sign-definite
    double n_star = 0.0;
    double lambda0 = 0.0;          // first Dirichlet eigenvalue of the unit ball
    nlohmann::json to_json() const;
};

ContrastBound contrast_lower_bound(const RadialProfile& profile_c,
                                   const RadialProfile& profile_b, int dimension);

// shared sweep machinery: bracket sign changes of fn on a uniform grid over
// [0, k_max], polish with Brent, flag near-tangent dips
struct SweepOutcome {
    std::vector<SpectrumEntry> roots;       // m/multiplicity left to caller
    std::vector<SuspectedZero> suspected;
    double max_abs = 0.0;                   // max |fn| over the grid
    std::vector<double> grid_values;
};
SweepOutcome sweep_zeros(const std::function<double(double)>& fn, double k_max,
                         double grid_density, double root_tol, unsigned workers = 1);

} // namespace itev
