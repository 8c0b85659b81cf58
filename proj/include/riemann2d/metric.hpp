#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "riemann2d/errors.hpp"
#include "riemann2d/vec.hpp"

namespace riemann2d {

// Position in a coordinate chart.
struct ChartPoint {
    double x = 0.0;
    double y = 0.0;

    constexpr ChartPoint() = default;
    constexpr ChartPoint(double xx, double yy) : x(xx), y(yy) {}
    explicit constexpr ChartPoint(Vec2 v) : x(v.x), y(v.y) {}

    constexpr Vec2 vec() const { return {x, y}; }
    double radius() const { return std::hypot(x, y); }
    constexpr ChartPoint offset(Vec2 d) const { return {x + d.x, y + d.y}; }
};

enum class Variance { contravariant, covariant };

// Component tuple attached to a chart point. The variance flag records
// whether the components transform as a vector or a covector.
struct TangentTuple {
    ChartPoint base;
    Vec2 components;
    Variance variance = Variance::contravariant;
};

// Gamma^k_ij at a point, symmetric in the lower indices.
struct ChristoffelTensor {
    ChartPoint base;
    // gamma[k][i][j]
    double gamma[2][2][2] = {};

    double& operator()(int k, int i, int j) { return gamma[k][i][j]; }
    double operator()(int k, int i, int j) const { return gamma[k][i][j]; }
};

// Radial structure of a metric that is rotationally symmetric about the
// chart origin: the polar radial component g_rr as a function of the
// chart radius, and the warp f(r') giving the circumference radius at
// Riemannian radius r' (ds^2 = dr'^2 + f(r')^2 dphi^2).
struct RadialSymmetry {
    std::function<double(double)> radial_component; // g_rr(chart radius)
    std::function<double(double)> warp;             // f(r')
    double warp_domain_end = 0.0;                   // natural end of f's domain
    double chart_radius_max = 0.0;                  // chart radius bound
};

// A 2D Riemannian metric given in a chart: a matrix-valued function plus
// a domain predicate. Evaluation is pure; fields are safe to share.
struct MetricField {
    std::string name;
    std::function<Mat2(ChartPoint)> g;
    std::function<bool(ChartPoint)> domain;
    std::optional<RadialSymmetry> radial_symmetry;
    // optional closed-form Christoffels; empty => finite differences
    std::function<ChristoffelTensor(ChartPoint)> christoffel_analytic;
};

inline Mat2 metric_at(const MetricField& m, ChartPoint p) {
    if (!m.domain(p))
        throw DomainError(m.name + ": point (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ") outside chart domain");
    return m.g(p);
}

inline Mat2 inverse_metric_at(const MetricField& m, ChartPoint p) {
    const Mat2 g = metric_at(m, p);
    const double det = g.det();
    if (!(det > 0.0))
        throw SingularMetricError(m.name + ": metric determinant " +
                                  std::to_string(det) + " is not positive");
    const double s = 1.0 / det;
    return {g.d * s, -g.b * s, -g.c * s, g.a * s};
}

inline double volume_element_at(const MetricField& m, ChartPoint p) {
    const Mat2 g = metric_at(m, p);
    const double det = g.det();
    if (!(det > 0.0))
        throw SingularMetricError(m.name + ": metric determinant not positive");
    return std::sqrt(det);
}

inline double g_inner(const MetricField& m, ChartPoint p, Vec2 v, Vec2 w) {
    const Mat2 g = metric_at(m, p);
    return v.dot(g * w);
}

inline double g_norm(const MetricField& m, ChartPoint p, Vec2 v) {
    return std::sqrt(g_inner(m, p, v, v));
}

// Relative central-difference step: 1e-5 * max(1, |coordinate|).
inline Vec2 fd_steps_for(ChartPoint p) {
    return {1e-5 * std::max(1.0, std::abs(p.x)),
            1e-5 * std::max(1.0, std::abs(p.y))};
}

// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
// fd_step == 0 selects the analytic Christoffels when the metric carries
// them, otherwise the relative-step central difference.
inline ChristoffelTensor christoffel_at(const MetricField& m, ChartPoint p,
                                        double fd_step = 0.0) {
    if (fd_step == 0.0 && m.christoffel_analytic) return m.christoffel_analytic(p);

    Vec2 h = fd_steps_for(p);
    if (fd_step > 0.0) h = {fd_step, fd_step};

    const ChartPoint xp = p.offset({h.x, 0.0}), xm = p.offset({-h.x, 0.0});
    const ChartPoint yp = p.offset({0.0, h.y}), ym = p.offset({0.0, -h.y});
    if (!m.domain(xp) || !m.domain(xm) || !m.domain(yp) || !m.domain(ym))
        throw DomainError(m.name + ": Christoffel stencil leaves the chart domain");

    // dg[l][i][j] = d_l g_ij
    double dg[2][2][2];
    const Mat2 gxp = m.g(xp), gxm = m.g(xm), gyp = m.g(yp), gym = m.g(ym);
    const auto fill = [](double out[2][2], const Mat2& a, const Mat2& b, double hh) {
        out[0][0] = (a.a - b.a) / (2.0 * hh);
        out[0][1] = (a.b - b.b) / (2.0 * hh);
        out[1][0] = (a.c - b.c) / (2.0 * hh);
        out[1][1] = (a.d - b.d) / (2.0 * hh);
    };
    fill(dg[0], gxp, gxm, h.x);
    fill(dg[1], gyp, gym, h.y);

    const Mat2 ginv = inverse_metric_at(m, p);
    const double gi[2][2] = {{ginv.a, ginv.b}, {ginv.c, ginv.d}};

    ChristoffelTensor out;
    out.base = p;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += gi[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                out(k, i, j) = 0.5 * s;
                out(k, j, i) = out(k, i, j);
            }
    return out;
}

// Musical isomorphisms: index lowering and raising by g and g^{-1}.
inline TangentTuple flat(const MetricField& m, const TangentTuple& v) {
    if (v.variance != Variance::contravariant)
        throw std::invalid_argument("flat: expects a contravariant tuple");
    const Mat2 g = metric_at(m, v.base);
    return {v.base, g * v.components, Variance::covariant};
}

inline TangentTuple sharp(const MetricField& m, const TangentTuple& v) {
    if (v.variance != Variance::covariant)
        throw std::invalid_argument("sharp: expects a covariant tuple");
    const Mat2 gi = inverse_metric_at(m, v.base);
    return {v.base, gi * v.components, Variance::contravariant};
}

} // namespace riemann2d
