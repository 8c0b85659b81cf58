#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "riemann2d/errors.hpp"
#include "riemann2d/metric.hpp"

namespace riemann2d {

namespace detail {

// Rotationally symmetric Cartesian chart g = I + phi(s) x x^T with
// s = x^2 + y^2. Closed-form Christoffels:
//   Gamma^k_ij = x_k (phi'(s) x_i x_j + phi(s) delta_ij) / (1 + phi(s) s).
inline MetricField radial_cartesian_chart(std::string name,
                                          std::function<double(double)> phi,
                                          std::function<double(double)> dphi,
                                          RadialSymmetry radial) {
    MetricField m;
    m.name = std::move(name);
    const double rmax = radial.chart_radius_max;
    m.domain = [rmax](ChartPoint p) { return p.radius() < rmax; };
    m.g = [phi](ChartPoint p) {
        const Vec2 x = p.vec();
        return Mat2::identity() + Mat2::outer(x, phi(x.dot(x)));
    };
    m.christoffel_analytic = [phi, dphi](ChartPoint p) {
        const Vec2 x = p.vec();
        const double s = x.dot(x);
        const double ph = phi(s), dph = dphi(s);
        const double denom = 1.0 + ph * s;
        const double xi[2] = {x.x, x.y};
        ChristoffelTensor out;
        out.base = p;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    out(k, i, j) = xi[k] *
                                   (dph * xi[i] * xi[j] + ph * (i == j ? 1.0 : 0.0)) /
                                   denom;
        return out;
    };
    m.radial_symmetry = std::move(radial);
    return m;
}

} // namespace detail

// Flat metric, identity everywhere inside the given chart radius.
inline MetricField euclidean_metric(double domain_radius =
                                        std::numeric_limits<double>::infinity()) {
    RadialSymmetry rs;
    rs.radial_component = [](double) { return 1.0; };
    rs.warp = [](double rp) { return rp; };
    rs.warp_domain_end = domain_radius;
    rs.chart_radius_max = domain_radius;
    return detail::radial_cartesian_chart(
        "euclidean", [](double) { return 0.0; }, [](double) { return 0.0; },
        std::move(rs));
}

// Unit sphere seen through the orthonormal projection onto the equatorial
// plane; covers the open half sphere, chart radius < 1.
//   g(x, y) = I + x x^T / (1 - x^2 - y^2)
inline MetricField sphere_projection_metric() {
    RadialSymmetry rs;
    rs.radial_component = [](double rhat) { return 1.0 / (1.0 - rhat * rhat); };
    rs.warp = [](double rp) { return std::sin(rp); };
    rs.warp_domain_end = M_PI;
    rs.chart_radius_max = 1.0;
    return detail::radial_cartesian_chart(
        "sphere_projection", [](double s) { return 1.0 / (1.0 - s); },
        [](double s) { const double w = 1.0 - s; return 1.0 / (w * w); },
        std::move(rs));
}

// Same geometry in polar chart coordinates (x, y) = (rhat, phi):
//   g = diag(1 / (1 - rhat^2), rhat^2)
inline MetricField sphere_polar_metric() {
    MetricField m;
    m.name = "sphere_polar";
    m.domain = [](ChartPoint p) { return p.x > 0.0 && p.x < 1.0; };
    m.g = [](ChartPoint p) {
        return Mat2{1.0 / (1.0 - p.x * p.x), 0.0, 0.0, p.x * p.x};
    };
    return m;
}

// Hyperbolic plane in the chart whose radius equals the circumference
// radius (r_hat = sinh r'):  g = I - x x^T / (1 + x^2 + y^2)
inline MetricField hyperbolic_metric(double domain_radius) {
    RadialSymmetry rs;
    rs.radial_component = [](double rhat) { return 1.0 / (1.0 + rhat * rhat); };
    rs.warp = [](double rp) { return std::sinh(rp); };
    rs.warp_domain_end = std::numeric_limits<double>::infinity();
    rs.chart_radius_max = domain_radius;
    return detail::radial_cartesian_chart(
        "hyperbolic", [](double s) { return -1.0 / (1.0 + s); },
        [](double s) { const double w = 1.0 + s; return 1.0 / (w * w); },
        std::move(rs));
}

enum class WarpProfile { flat, sin, sinh };

// Warped-product family ds^2 = dr'^2 + f(r')^2 dphi^2 with
// f in {r', sin r', sinh r'}, charted so that the chart radius equals
// f(r'). domain_radius is in chart-radius units.
inline MetricField warped_metric(WarpProfile profile, double domain_radius) {
    switch (profile) {
    case WarpProfile::flat: {
        MetricField m = euclidean_metric(domain_radius);
        m.name = "warped_flat";
        return m;
    }
    case WarpProfile::sin: {
        MetricField m = sphere_projection_metric();
        m.name = "warped_sin";
        const double cap = std::min(domain_radius, 1.0);
        m.domain = [cap](ChartPoint p) { return p.radius() < cap; };
        m.radial_symmetry->chart_radius_max = cap;
        return m;
    }
    case WarpProfile::sinh: {
        MetricField m = hyperbolic_metric(domain_radius);
        m.name = "warped_sinh";
        return m;
    }
    }
    throw ConfigError("warped_metric: unknown profile");
}

// Manifold spec file:
// { "name": str, "kind": "builtin"|"warped",
//   "builtin": "euclidean"|"sphere_projection"|"sphere_polar",
//   "profile": "flat"|"sin"|"sinh", "domain_radius": float }
inline MetricField metric_from_spec(const nlohmann::json& spec) {
    if (!spec.is_object()) throw ConfigError("manifold spec: expected a JSON object");
    const std::string kind = spec.value("kind", "");
    const double domain_radius = spec.value("domain_radius", 1.0);
    if (!(domain_radius > 0.0))
        throw ConfigError("manifold spec: domain_radius must be positive");

    MetricField m;
    if (kind == "builtin") {
        const std::string b = spec.value("builtin", "");
        if (b == "euclidean") m = euclidean_metric(domain_radius);
        else if (b == "sphere_projection") m = sphere_projection_metric();
        else if (b == "sphere_polar") m = sphere_polar_metric();
        else throw ConfigError("manifold spec: unknown builtin '" + b + "'");
    } else if (kind == "warped") {
        const std::string p = spec.value("profile", "");
        if (p == "flat") m = warped_metric(WarpProfile::flat, domain_radius);
        else if (p == "sin") m = warped_metric(WarpProfile::sin, domain_radius);
        else if (p == "sinh") m = warped_metric(WarpProfile::sinh, domain_radius);
        else throw ConfigError("manifold spec: unknown profile '" + p + "'");
    } else {
        throw ConfigError("manifold spec: kind must be 'builtin' or 'warped'");
    }
    if (spec.contains("name") && spec["name"].is_string())
        m.name = spec["name"].get<std::string>();
    return m;
}

inline MetricField metric_from_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifold spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifold spec parse error in " + path + ": " + e.what());
    }
    return metric_from_spec(j);
}

} // namespace riemann2d
