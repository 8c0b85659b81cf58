#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "riemann2d/errors.hpp"

namespace riemann2d {

// Shape-preserving cubic interpolant (Fritsch-Carlson node slopes) on a
// uniform grid. Monotone data yields a monotone interpolant, which the
// profile inversion relies on.
class UniformPchip {
public:
    UniformPchip() = default;

    UniformPchip(double x0, double dx, std::vector<double> values)
        : x0_(x0), dx_(dx), y_(std::move(values)) {
        if (y_.size() < 2) throw StepError("UniformPchip: need at least 2 nodes");
        if (!(dx_ > 0.0)) throw StepError("UniformPchip: step must be positive");
        build_slopes();
    }

    double x_front() const { return x0_; }
    double x_back() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }
    double grid_step() const { return dx_; }
    std::size_t size() const { return y_.size(); }
    const std::vector<double>& values() const { return y_; }

    double operator()(double x) const {
        const auto [i, u] = locate(x);
        const double h = dx_;
        const double y0 = y_[i], y1 = y_[i + 1];
        const double m0 = d_[i] * h, m1 = d_[i + 1] * h;
        const double u2 = u * u, u3 = u2 * u;
        return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 +
               (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * m1;
    }

    double derivative(double x) const {
        const auto [i, u] = locate(x);
        const double h = dx_;
        const double y0 = y_[i], y1 = y_[i + 1];
        const double m0 = d_[i], m1 = d_[i + 1];
        const double u2 = u * u;
        return ((6.0 * u2 - 6.0 * u) * y0 + (-6.0 * u2 + 6.0 * u) * y1) / h +
               (3.0 * u2 - 4.0 * u + 1.0) * m0 + (3.0 * u2 - 2.0 * u) * m1;
    }

private:
    std::pair<std::size_t, double> locate(double x) const {
        const double lo = x_front(), hi = x_back();
        const double pad = 1e-12 * (1.0 + std::abs(hi));
        if (x < lo - pad || x > hi + pad)
            throw RangeError("UniformPchip: query outside tabulated range");
        double t = (x - x0_) / dx_;
        auto i = static_cast<std::ptrdiff_t>(std::floor(t));
        const auto last = static_cast<std::ptrdiff_t>(y_.size()) - 2;
        if (i < 0) i = 0;
        if (i > last) i = last;
        return {static_cast<std::size_t>(i), t - static_cast<double>(i)};
    }

    void build_slopes() {
        const std::size_t n = y_.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / dx_;
        d_.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] > 0.0)
                d_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
        }
        d_.front() = end_slope(delta[0], n > 2 ? delta[1] : delta[0]);
        d_.back() = end_slope(delta[n - 2], n > 2 ? delta[n - 3] : delta[n - 2]);
    }

    // Non-centered three-point estimate, clipped to keep the end interval
    // shape-preserving.
    static double end_slope(double d_near, double d_far) {
        double d = (3.0 * d_near - d_far) / 2.0;
        if (d * d_near <= 0.0) return 0.0;
        if (d_near * d_far <= 0.0 && std::abs(d) > 3.0 * std::abs(d_near))
            return 3.0 * d_near;
        return d;
    }

    double x0_ = 0.0;
    double dx_ = 1.0;
    std::vector<double> y_;
    std::vector<double> d_;
};

} // namespace riemann2d
