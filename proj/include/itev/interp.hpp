#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "itev/errors.hpp"

namespace itev {

// Cubic Hermite interpolant on a uniform grid with exact nodal slopes.
// With analytic slopes and a fine grid the piecewise cubics reproduce a
// smooth monotone function to O(dx^4) and stay monotone themselves.
class HermiteTable {
public:
    HermiteTable() = default;

    HermiteTable(double x0, double dx, std::vector<double> y, std::vector<double> dy)
        : x0_(x0), dx_(dx), y_(std::move(y)), dy_(std::move(dy)) {
        if (y_.size() != dy_.size() || y_.size() < 2)
            throw InputError("HermiteTable: need matching value/slope arrays, size >= 2");
    }

    bool empty() const { return y_.empty(); }
    double x_front() const { return x0_; }
    double x_back() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

    double eval(double x) const {
        std::size_t i;
        double t;
        locate(x, i, t);
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y_[i] + h10 * dx_ * dy_[i] + h01 * y_[i + 1] + h11 * dx_ * dy_[i + 1];
    }

    double deriv(double x) const {
        std::size_t i;
        double t;
        locate(x, i, t);
        const double g00 = 6 * t * (t - 1);
        const double g10 = (1 - t) * (1 - 3 * t);
        const double g01 = -g00;
        const double g11 = t * (3 * t - 2);
        return (g00 * y_[i] + g01 * y_[i + 1]) / dx_ + g10 * dy_[i] + g11 * dy_[i + 1];
    }

private:
    void locate(double x, std::size_t& i, double& t) const {
        const double s = (x - x0_) / dx_;
        double fi = std::floor(s);
        const double last = static_cast<double>(y_.size() - 2);
        if (fi < 0) fi = 0;
        if (fi > last) fi = last;
        i = static_cast<std::size_t>(fi);
        t = s - fi;
    }

    double x0_ = 0.0;
    double dx_ = 1.0;
    std::vector<double> y_;
    std::vector<double> dy_;
};

} // namespace itev
