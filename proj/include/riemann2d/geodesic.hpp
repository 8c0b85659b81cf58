#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "riemann2d/errors.hpp"
#include "riemann2d/metric.hpp"
#include "riemann2d/ode.hpp"
#include "riemann2d/radial_length.hpp"
#include "riemann2d/vec.hpp"

namespace riemann2d {

// g-orthonormal basis attached to a chart point; the domain of the
// exponential map's coefficient tuples.
struct NormalFrame {
    ChartPoint origin;
    Vec2 e1{1.0, 0.0};
    Vec2 e2{0.0, 1.0};

    Vec2 chart_vector(Vec2 coefficients) const {
        return e1 * coefficients.x + e2 * coefficients.y;
    }
};

// Gram-Schmidt of the coordinate axes under g(origin).
inline NormalFrame make_normal_frame(const MetricField& m, ChartPoint origin) {
    const Mat2 g = metric_at(m, origin);
    Vec2 e1{1.0, 0.0};
    e1 = e1 / std::sqrt(e1.dot(g * e1));
    Vec2 e2{0.0, 1.0};
    e2 = e2 - e1 * e1.dot(g * e2);
    e2 = e2 / std::sqrt(e2.dot(g * e2));
    return {origin, e1, e2};
}

// Frame coefficients of a chart vector (frame assumed g-orthonormal).
inline Vec2 frame_coefficients(const MetricField& m, const NormalFrame& frame,
                               Vec2 chart_vector) {
    const Mat2 g = metric_at(m, frame.origin);
    return {chart_vector.dot(g * frame.e1), chart_vector.dot(g * frame.e2)};
}

// Arc-length sampled geodesic with its tangent field. Immutable after
// construction; holds a non-owning reference to the metric it lives on.
struct GeodesicCurve {
    std::vector<double> param;      // arc length values t
    std::vector<ChartPoint> points;
    std::vector<Vec2> tangents;     // contravariant chart components
    const MetricField* metric = nullptr;

    std::size_t size() const { return param.size(); }
    ChartPoint front() const { return points.front(); }
    ChartPoint back() const { return points.back(); }
};

inline double g_speed(const GeodesicCurve& c, std::size_t i) {
    return g_norm(*c.metric, c.points[i], c.tangents[i]);
}

namespace detail {

constexpr double kVolumeBlowupCap = 1e8;

// Geodesic equation as a first-order system on (x, y, vx, vy).
inline std::array<double, 4> geodesic_rhs(const MetricField& m,
                                          const std::array<double, 4>& s) {
    const ChartPoint p{s[0], s[1]};
    const ChristoffelTensor gma = christoffel_at(m, p);
    const double v[2] = {s[2], s[3]};
    double acc[2];
    for (int k = 0; k < 2; ++k) {
        double a = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a += gma(k, i, j) * v[i] * v[j];
        acc[k] = -a;
    }
    return {s[2], s[3], acc[0], acc[1]};
}

inline bool state_ok(const MetricField& m, const std::array<double, 4>& s) {
    const ChartPoint p{s[0], s[1]};
    if (!m.domain(p)) return false;
    const Mat2 g = m.g(p);
    const double det = g.det();
    if (!(det > 0.0) || !std::isfinite(det)) return false;
    return std::sqrt(det) < kVolumeBlowupCap;
}

// Advances one RK4 step; stage evaluations outside the chart surface as
// DomainError and are reported as an escape.
inline bool try_step(const MetricField& m, std::array<double, 4>& state,
                     double t, double h) {
    try {
        const auto next = rk4_step<4>(
            [&m](double, const std::array<double, 4>& y) {
                return geodesic_rhs(m, y);
            },
            t, state, h);
        if (!state_ok(m, next)) return false;
        state = next;
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

} // namespace detail

// Shoots the geodesic with initial point frame.origin and initial
// g-unit chart velocity v, storing every integration node.
inline GeodesicCurve geodesic_shoot(const MetricField& m, const NormalFrame& frame,
                                    Vec2 v, double t_max, int n_steps) {
    if (n_steps < 2) throw StepError("geodesic_shoot: n_steps < 2");
    if (!(t_max > 0.0)) throw StepError("geodesic_shoot: t_max must be positive");
    const double speed0 = g_norm(m, frame.origin, v);
    if (std::abs(speed0 - 1.0) > 1e-8)
        throw std::invalid_argument("geodesic_shoot: initial velocity is not g-unit");

    GeodesicCurve out;
    out.metric = &m;
    out.param.reserve(n_steps + 1);
    out.points.reserve(n_steps + 1);
    out.tangents.reserve(n_steps + 1);

    std::array<double, 4> state{frame.origin.x, frame.origin.y, v.x, v.y};
    const double h = t_max / n_steps;
    out.param.push_back(0.0);
    out.points.push_back(frame.origin);
    out.tangents.push_back(v);
    for (int k = 0; k < n_steps; ++k) {
        const double t = h * k;
        if (!detail::try_step(m, state, t, h))
            throw DomainEscapeError("geodesic_shoot: curve left the chart", t);
        out.param.push_back(t + h);
        out.points.push_back({state[0], state[1]});
        out.tangents.push_back({state[2], state[3]});
    }
    return out;
}

// Exponential map: v is a contravariant coefficient tuple in the frame.
inline ChartPoint exp_map(const MetricField& m, const NormalFrame& frame, Vec2 v,
                          int steps_per_unit = 2000) {
    const Vec2 chart_v = frame.chart_vector(v);
    const double len = g_norm(m, frame.origin, chart_v);
    if (len < 1e-300) return frame.origin;
    const int n = std::max(2, static_cast<int>(std::ceil(len * steps_per_unit)));
    const GeodesicCurve c = geodesic_shoot(m, frame, chart_v / len, len, n);
    return c.back();
}

// Radial inverse of exp_map for metrics rotationally symmetric about the
// chart origin: bisection on the arc length of the radial ray.
inline Vec2 log_map_radial(const MetricField& m, const NormalFrame& frame,
                           ChartPoint q, double tol = 1e-10,
                           int steps_per_unit = 2000) {
    if (!m.radial_symmetry)
        throw DomainError("log_map_radial: metric has no radial symmetry data");
    if (frame.origin.radius() > 1e-12)
        throw DomainError("log_map_radial: frame origin must be the chart origin");
    if (!m.domain(q)) throw DomainError("log_map_radial: point outside chart");

    const Vec2 d = q.vec() - frame.origin.vec();
    const double target = d.norm();
    if (target < 1e-300) return {0.0, 0.0};

    const auto& rs = *m.radial_symmetry;
    const double limit =
        std::isfinite(rs.chart_radius_max)
            ? std::numeric_limits<double>::infinity()
            : 4.0 * target + 1.0;
    const LengthProfile lp = solve_length_preserving(
        rs.radial_component, rs.chart_radius_max,
        std::max(64, steps_per_unit), limit);
    if (target > lp.r_hat_end())
        throw DomainError("log_map_radial: point beyond the first blow-up radius");

    double lo = 0.0, hi = lp.r_prime_end();
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lp.r_hat(mid) < target ? lo : hi) = mid;
        if (hi - lo < 0.25 * tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("log_map_radial: bisection did not converge");
    const double r_prime = 0.5 * (lo + hi);
    const Vec2 u = d / target;
    return frame_coefficients(m, frame, u) * r_prime;
}

// Parallel transport of v0 along a sampled geodesic:
//   du^k/dt = -Gamma^k_ij c'^i u^j.
// Midpoint stage values come from the cubic Hermite interpolant of the
// stored samples, so the RK4 order is preserved.
inline std::vector<TangentTuple> parallel_transport(const MetricField& m,
                                                    const GeodesicCurve& curve,
                                                    const TangentTuple& v0) {
    if (curve.size() < 2)
        throw StepError("parallel_transport: curve has fewer than 2 samples");
    if (v0.variance != Variance::contravariant)
        throw std::invalid_argument("parallel_transport: v0 must be contravariant");
    const Vec2 d0 = v0.base.vec() - curve.front().vec();
    if (d0.norm() > 1e-9)
        throw std::invalid_argument("parallel_transport: v0 not based at curve start");

    const auto rhs_at = [&m](ChartPoint p, Vec2 cdot, Vec2 u) {
        const ChristoffelTensor gma = christoffel_at(m, p);
        const double cd[2] = {cdot.x, cdot.y};
        const double uu[2] = {u.x, u.y};
        double out[2];
        for (int k = 0; k < 2; ++k) {
            double a = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) a += gma(k, i, j) * cd[i] * uu[j];
            out[k] = -a;
        }
        return Vec2{out[0], out[1]};
    };

    std::vector<TangentTuple> out;
    out.reserve(curve.size());
    Vec2 u = v0.components;
    out.push_back({curve.points[0], u, Variance::contravariant});
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double h = curve.param[i + 1] - curve.param[i];
        const ChartPoint c0 = curve.points[i], c1 = curve.points[i + 1];
        const Vec2 t0 = curve.tangents[i], t1 = curve.tangents[i + 1];
        const ChartPoint cm{(c0.vec() + c1.vec()) * 0.5 + (t0 - t1) * (h / 8.0)};
        const Vec2 tm = (c1.vec() - c0.vec()) * (1.5 / h) - (t0 + t1) * 0.25;

        const Vec2 k1 = rhs_at(c0, t0, u);
        const Vec2 k2 = rhs_at(cm, tm, u + k1 * (0.5 * h));
        const Vec2 k3 = rhs_at(cm, tm, u + k2 * (0.5 * h));
        const Vec2 k4 = rhs_at(c1, t1, u + k3 * h);
        u = u + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        out.push_back({c1, u, Variance::contravariant});
    }
    return out;
}

namespace detail {

// Integrates a geodesic from the origin, capturing the state at each
// requested arc length. Substeps are sized by steps_per_unit.
inline std::vector<std::array<double, 4>> shoot_capture(
    const MetricField& m, ChartPoint origin, Vec2 unit_v,
    const std::vector<double>& targets, int steps_per_unit) {
    std::vector<std::array<double, 4>> out;
    out.reserve(targets.size());
    std::array<double, 4> state{origin.x, origin.y, unit_v.x, unit_v.y};
    double t = 0.0;
    for (double target : targets) {
        const double span = target - t;
        if (span < -1e-12)
            throw StepError("shoot_capture: targets must be non-decreasing");
        if (span > 1e-15) {
            const int n = std::max(
                2, static_cast<int>(std::ceil(span * steps_per_unit)));
            const double h = span / n;
            for (int k = 0; k < n; ++k) {
                if (!try_step(m, state, t, h))
                    throw DomainEscapeError("geodesic left the chart", t);
                t += h;
            }
        }
        out.push_back(state);
    }
    return out;
}

} // namespace detail

// Volume element of the metric pulled back to normal coordinates,
// evaluated along the radial direction: the Jacobian determinant of the
// exponential map (angular column by central differences across
// neighboring geodesics) times the chart volume element.
inline std::vector<double> normal_volume_profile(const MetricField& m,
                                                 const NormalFrame& frame,
                                                 Vec2 direction,
                                                 const std::vector<double>& r_grid,
                                                 int steps_per_unit = 2000) {
    const double dn = direction.norm();
    if (!(dn > 0.0))
        throw std::invalid_argument("normal_volume_profile: zero direction");
    const double theta = std::atan2(direction.y / dn, direction.x / dn);
    const double dtheta = 1e-4;

    const auto chart_unit = [&](double ang) {
        const Vec2 coeff{std::cos(ang), std::sin(ang)};
        const Vec2 cv = frame.chart_vector(coeff);
        return cv / g_norm(m, frame.origin, cv);
    };

    const auto c0 = detail::shoot_capture(m, frame.origin, chart_unit(theta),
                                          r_grid, steps_per_unit);
    const auto cp = detail::shoot_capture(m, frame.origin, chart_unit(theta + dtheta),
                                          r_grid, steps_per_unit);
    const auto cm = detail::shoot_capture(m, frame.origin, chart_unit(theta - dtheta),
                                          r_grid, steps_per_unit);

    std::vector<double> out(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double rp = r_grid[i];
        if (rp < 1e-9) {
            out[i] = 1.0;
            continue;
        }
        const Vec2 radial{c0[i][2], c0[i][3]};
        const Vec2 angular{(cp[i][0] - cm[i][0]) / (2.0 * dtheta * rp),
                           (cp[i][1] - cm[i][1]) / (2.0 * dtheta * rp)};
        const double jac = radial.x * angular.y - radial.y * angular.x;
        const ChartPoint p{c0[i][0], c0[i][1]};
        out[i] = std::abs(jac) * volume_element_at(m, p);
    }
    return out;
}

} // namespace riemann2d
