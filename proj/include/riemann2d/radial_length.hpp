#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "riemann2d/errors.hpp"
#include "riemann2d/interpolate.hpp"
#include "riemann2d/ode.hpp"
#include "riemann2d/quadrature.hpp"

namespace riemann2d {

// Tabulated solution r_hat(r') of the radial unit-speed condition
//   d r_hat / d r' = 1 / sqrt(g_rr(r_hat)),  r_hat(0) = 0,
// i.e. the chart radius reached by a radial geodesic of Riemannian
// length r'.
class LengthProfile {
public:
    LengthProfile(UniformPchip table, double r_hat_max, bool reached_boundary)
        : table_(std::move(table)), r_hat_max_(r_hat_max),
          reached_boundary_(reached_boundary) {}

    double r_prime_end() const { return table_.x_back(); }
    double r_hat_end() const { return table_.values().back(); }
    double grid_step() const { return table_.grid_step(); }
    bool reached_boundary() const { return reached_boundary_; }
    double r_hat_bound() const { return r_hat_max_; }

    double r_hat(double r_prime) const { return table_(r_prime); }
    double operator()(double r_prime) const { return table_(r_prime); }

    // Monotone bisection for the Riemannian radius of a chart radius.
    double r_prime_of(double r_hat, double tol = 1e-12,
                      int max_iter = 200) const {
        if (r_hat < 0.0 || r_hat > r_hat_end() + 1e-12)
            throw RangeError("LengthProfile: chart radius outside solved range");
        if (r_hat <= 0.0) return 0.0;
        double lo = 0.0, hi = r_prime_end();
        for (int it = 0; it < max_iter; ++it) {
            const double mid = 0.5 * (lo + hi);
            (table_(mid) < r_hat ? lo : hi) = mid;
            if (hi - lo < tol) return 0.5 * (lo + hi);
        }
        throw ConvergenceError("LengthProfile: radius bisection did not converge");
    }

private:
    UniformPchip table_;
    double r_hat_max_;
    bool reached_boundary_;
};

namespace detail {

// Arc length of the radial ray up to the chart boundary,
//   integral of sqrt(g_rr) over [0, r_hat_max].
// The boundary piece is integrated in the substituted variable
// t = sqrt(r_hat_max - r_hat), which stays smooth when g_rr has an
// inverse-linear blow-up there (the half-chart case).
inline double radial_arc_length_to_boundary(
    const std::function<double(double)>& g_rr, double r_hat_max, int n) {
    if (!std::isfinite(r_hat_max)) return std::numeric_limits<double>::infinity();
    const int panels = std::max(n, 512);
    const double split = 0.9 * r_hat_max;
    const double inner = simpson(
        [&](double rh) { return std::sqrt(g_rr(rh)); }, 0.0, split, panels);
    const double t_max = std::sqrt(r_hat_max - split);
    // The t floor keeps r_hat_max - t^2 far enough inside the chart that
    // the cancellation in 1 - r_hat^2 style factors stays benign when
    // g_rr blows up at the boundary. The t = 0 node itself is linearly
    // extrapolated, which gives the exact limit both for a regular
    // boundary (integrand vanishing linearly) and a blow-up (finite
    // even limit).
    const double t_floor = 3e-6 * std::sqrt(std::max(1.0, r_hat_max));
    const auto raw = [&](double t) {
        return 2.0 * t * std::sqrt(g_rr(r_hat_max - t * t));
    };
    const double outer = simpson(
        [&](double t) {
            if (t >= t_floor) return raw(t);
            return 2.0 * raw(t_floor) - raw(2.0 * t_floor);
        },
        0.0, t_max, panels);
    return inner + outer;
}

} // namespace detail

// Integrates the unit-g-speed radial ODE with fixed-step RK4 until the
// chart radius bound or the requested arc-length span is reached.
// g_rr must be positive on [0, r_hat_max).
inline LengthProfile solve_length_preserving(
    const std::function<double(double)>& g_rr, double r_hat_max,
    int n_steps = 2000,
    double r_prime_limit = std::numeric_limits<double>::infinity()) {
    if (n_steps < 2) throw StepError("solve_length_preserving: n_steps < 2");
    if (!(r_hat_max > 0.0))
        throw StepError("solve_length_preserving: r_hat_max must be positive");

    const double to_boundary =
        detail::radial_arc_length_to_boundary(g_rr, r_hat_max, n_steps);
    if (!std::isfinite(to_boundary) && !std::isfinite(r_prime_limit))
        throw StepError(
            "solve_length_preserving: unbounded chart needs a finite r' limit");
    const bool boundary_limited = to_boundary <= r_prime_limit;
    const double span = boundary_limited ? to_boundary : r_prime_limit;

    // stage arguments may graze the boundary; evaluate just inside it so
    // a regular boundary keeps its true slope and a singular one damps
    // the step smoothly
    const double inside = r_hat_max * (1.0 - 1e-12);
    const auto rhs = [&, inside](double, double rh) {
        const double rh_eff = std::clamp(rh, 0.0, inside);
        const double val = g_rr(rh_eff);
        if (!(val > 0.0))
            throw SingularityError(
                "solve_length_preserving: g_rr not positive inside the chart",
                rh_eff);
        return 1.0 / std::sqrt(val);
    };

    const double h = span / n_steps;
    std::vector<double> values(static_cast<std::size_t>(n_steps) + 1);
    values[0] = 0.0;
    double rh = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        rh = rk4_step(rhs, h * k, rh, h);
        if (rh > r_hat_max) rh = r_hat_max;
        values[static_cast<std::size_t>(k) + 1] = rh;
    }
    return LengthProfile(UniformPchip(0.0, h, std::move(values)), r_hat_max,
                         boundary_limited);
}

} // namespace riemann2d
