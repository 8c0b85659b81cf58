#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "riemann2d/errors.hpp"
#include "riemann2d/geodesic.hpp"
#include "riemann2d/interpolate.hpp"
#include "riemann2d/metric.hpp"
#include "riemann2d/ode.hpp"
#include "riemann2d/radial_length.hpp"
#include "riemann2d/vec.hpp"

namespace riemann2d {

// Tabulated radial maps of the volume-preserving distortion for a fixed
// origin: synthetic radius r against Riemannian radius r'(r), chart
// radius r_hat(r), the slip dr'/dr and the radial volume element g(r').
//
// r' solves  dr'/dr = r / (r' g(r')),  r'(0) = 0; the integration runs
// on y = r'^2 (dy/dr = 2 r / g(sqrt(y))), which keeps the right-hand
// side smooth through the origin. r_max, the synthetic radius of the
// first blow-up or chart cut, comes from the inverse-form integration
// dz/dr' = 2 r' g(r'), z = r^2, which stays regular where the forward
// form degenerates.
class RadialProfile {
public:
    RadialProfile(ChartPoint origin, std::function<double(double)> g_fn,
                  double g_domain_end, double r_max, bool singular_end,
                  UniformPchip r_prime, UniformPchip r_hat, UniformPchip g_vals)
        : origin_(origin), g_fn_(std::move(g_fn)), g_domain_end_(g_domain_end),
          r_max_(r_max), singular_end_(singular_end),
          r_prime_(std::move(r_prime)), r_hat_(std::move(r_hat)),
          g_vals_(std::move(g_vals)) {
        // cubic-term model of r'(r) below a grid node; the raw ratio
        // r'(r)/r is ill-conditioned against interpolation error as
        // r -> 0, which would pollute the slip there
        const double h = r_prime_.grid_step();
        splice_r_ = std::clamp(16.0 * h, h, 0.25 * r_prime_.x_back());
        splice_r_ = std::max(h, std::round(splice_r_ / h) * h);
        splice_c_ =
            (r_prime_(splice_r_) / splice_r_ - 1.0) / (splice_r_ * splice_r_);
    }

    ChartPoint origin() const { return origin_; }
    double r_max() const { return r_max_; }
    double r_solved() const { return r_prime_.x_back(); }
    bool singular_end() const { return singular_end_; }
    double g_domain_end() const { return g_domain_end_; }

    double r_prime(double r) const {
        check_range(r);
        return r_prime_(r);
    }

    double r_hat(double r) const {
        check_range(r);
        return r_hat_(r);
    }

    double g_of_r_prime(double r_prime) const {
        if (r_prime < 0.0 || r_prime > g_domain_end_ + 1e-12)
            throw RangeError("RadialProfile: r' outside the volume-element domain");
        return g_fn_(std::min(r_prime, g_domain_end_));
    }

    double slip(double r) const {
        if (r < 0.0 || r >= r_max_ + 1e-12)
            throw RangeError("RadialProfile: slip query at or past r_max");
        check_range(r);
        if (r < 1e-300) return 1.0;
        const double rp =
            r <= splice_r_ ? r * (1.0 + splice_c_ * r * r) : r_prime_(r);
        return r / (rp * g_of_r_prime(rp));
    }

    // sampled values on the uniform grid (for CSV emission)
    std::vector<double> sample_grid() const {
        std::vector<double> g;
        const std::size_t n = r_prime_.size();
        const double h = (r_prime_.x_back() - r_prime_.x_front()) /
                         static_cast<double>(n - 1);
        g.reserve(n);
        for (std::size_t i = 0; i < n; ++i) g.push_back(h * static_cast<double>(i));
        return g;
    }

    friend double inverse_profile(const RadialProfile& p, double r_hat);

private:
    void check_range(double r) const {
        if (r < 0.0 || r > r_prime_.x_back() + 1e-12)
            throw RangeError("RadialProfile: radius outside solved range");
    }

    ChartPoint origin_;
    std::function<double(double)> g_fn_;
    double g_domain_end_;
    double r_max_;
    bool singular_end_;
    UniformPchip r_prime_;
    UniformPchip r_hat_;
    UniformPchip g_vals_;
    double splice_r_ = 0.0;
    double splice_c_ = 0.0;
};

// Solves the volume-preserving radial ODE for a radial volume element
// g(r') > 0 defined on [0, g_domain_end] with g(0+) = 1.
inline RadialProfile solve_volume_preserving(
    const std::function<double(double)>& g_fn, double g_domain_end,
    double r_span, int n_steps, ChartPoint origin = {0.0, 0.0}) {
    if (n_steps < 2) throw StepError("solve_volume_preserving: n_steps < 2");
    if (!(g_domain_end > 0.0) || !std::isfinite(g_domain_end))
        throw StepError("solve_volume_preserving: bad volume-element domain");
    if (std::abs(g_fn(1e-8) - 1.0) > 1e-3)
        throw std::invalid_argument("solve_volume_preserving: g(0+) must be 1");

    // Inverse form z(r') = r^2: regular everywhere g is bounded. Detects
    // an interior zero of g by bisection.
    const int n_inv = std::max(n_steps, 2000);
    const double hp = g_domain_end / n_inv;
    double z = 0.0;
    double rp_end = g_domain_end;
    bool singular_end = false;
    {
        const auto rhs = [&](double rp, double) {
            return 2.0 * rp * g_fn(std::clamp(rp, 0.0, g_domain_end));
        };
        for (int k = 0; k < n_inv; ++k) {
            const double rp0 = hp * k;
            const double g_next = g_fn(std::min(hp * (k + 1), g_domain_end));
            if (!(g_next > 0.0)) {
                // locate g's zero inside (rp0, rp0 + hp]
                double lo = rp0, hi = hp * (k + 1);
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (g_fn(mid) > 0.0 ? lo : hi) = mid;
                }
                const double h_last = 0.5 * (lo + hi) - rp0;
                z = rk4_step(rhs, rp0, z, h_last);
                rp_end = rp0 + h_last;
                singular_end = true;
                break;
            }
            z = rk4_step(rhs, rp0, z, hp);
        }
        if (!singular_end && g_fn(g_domain_end) < 1e-6) singular_end = true;
    }
    const double r_max = std::sqrt(z);

    // Forward profile on y = r'^2. Near a singular end the forward form
    // loses smoothness, so the tabulation stops short of r_max there.
    const double r_stop =
        std::min(r_span, singular_end ? 0.98 * r_max : r_max);
    if (!(r_stop > 0.0))
        throw StepError("solve_volume_preserving: empty radius span");
    const auto fwd = [&](double r, double y) {
        const double rp = std::clamp(std::sqrt(std::max(y, 0.0)), 0.0, rp_end);
        const double g = g_fn(rp);
        if (!(g > 0.0))
            throw SingularityError("solve_volume_preserving: g vanished", rp);
        return 2.0 * r / g;
    };
    const double h = r_stop / n_steps;
    const std::size_t n_nodes = static_cast<std::size_t>(n_steps) + 1;
    std::vector<double> rp_vals(n_nodes), rhat_vals(n_nodes), g_vals(n_nodes);
    rp_vals[0] = 0.0;
    rhat_vals[0] = 0.0;
    g_vals[0] = g_fn(0.0);
    double y = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        y = rk4_step(fwd, h * k, y, h);
        const double rp = std::clamp(std::sqrt(std::max(y, 0.0)), 0.0, rp_end);
        const double g = g_fn(rp);
        rp_vals[static_cast<std::size_t>(k) + 1] = rp;
        rhat_vals[static_cast<std::size_t>(k) + 1] = g * rp;
        g_vals[static_cast<std::size_t>(k) + 1] = g;
    }

    return RadialProfile(origin, g_fn, rp_end, r_max, singular_end,
                         UniformPchip(0.0, h, std::move(rp_vals)),
                         UniformPchip(0.0, h, std::move(rhat_vals)),
                         UniformPchip(0.0, h, std::move(g_vals)));
}

// Volume element along the radial direction derived from a solved length
// profile of a chart whose angular metric is Euclidean (g_phiphi =
// chart radius squared): g(r') = r_hat(r') / r'. Below a splice radius
// the ratio is replaced by its curvature-quadratic model fitted at a
// grid node, where the tabulated value carries no interpolation error;
// the raw ratio is ill-conditioned as r' -> 0.
inline std::function<double(double)> radial_volume_element(const LengthProfile& lp) {
    const double step = lp.grid_step();
    const double splice =
        std::clamp(16.0 * step, step, 0.25 * lp.r_prime_end());
    const double r1 = std::max(step, std::round(splice / step) * step);
    const double c = (lp.r_hat(r1) / r1 - 1.0) / (r1 * r1);
    return [lp, r1, c](double rp) {
        if (rp <= r1) return 1.0 + c * rp * rp;
        return lp.r_hat(rp) / rp;
    };
}

// Full radial pipeline for a rotationally symmetric chart: length
// profile, volume element, then the distortion profile. For an
// unbounded chart the length solve is capped from the requested span.
inline RadialProfile build_radial_profile(const MetricField& m, int n_steps = 2000,
                                          double r_span =
                                              std::numeric_limits<double>::infinity()) {
    if (!m.radial_symmetry)
        throw DomainError("build_radial_profile: metric has no radial symmetry data");
    const auto& rs = *m.radial_symmetry;
    double limit = std::numeric_limits<double>::infinity();
    if (!std::isfinite(rs.chart_radius_max)) {
        if (!std::isfinite(r_span))
            throw StepError("build_radial_profile: unbounded chart needs a span");
        limit = 2.0 * r_span + 1.0;
    }
    const LengthProfile lp = solve_length_preserving(
        rs.radial_component, rs.chart_radius_max, n_steps, limit);
    return solve_volume_preserving(radial_volume_element(lp), lp.r_prime_end(),
                                   r_span, n_steps);
}

// Per-direction profile for metrics without rotational symmetry: the
// radial volume element is measured along the chosen direction from the
// Jacobian of neighboring geodesics, then fed to the radial solver.
// For a rotationally symmetric metric this agrees with
// build_radial_profile for every direction.
inline RadialProfile solve_volume_preserving_directional(
    const MetricField& m, const NormalFrame& frame, Vec2 direction,
    double r_prime_end, int n_steps = 2000,
    double r_span = std::numeric_limits<double>::infinity()) {
    const int n_grid = std::max(64, n_steps / 8);
    std::vector<double> grid(static_cast<std::size_t>(n_grid) + 1);
    for (int i = 0; i <= n_grid; ++i)
        grid[static_cast<std::size_t>(i)] = r_prime_end * i / n_grid;
    const std::vector<double> g_samples =
        normal_volume_profile(m, frame, direction, grid, n_steps);
    UniformPchip g_table(0.0, r_prime_end / n_grid, g_samples);
    const auto g_fn = [g_table](double rp) { return g_table(rp); };
    return solve_volume_preserving(g_fn, r_prime_end, r_span, n_steps,
                                   frame.origin);
}

// Synthetic radius of a chart radius: inverse of the increasing branch
// of r_hat(r).
inline double inverse_profile(const RadialProfile& p, double r_hat) {
    const auto& vals = p.r_hat_.values();
    if (r_hat < 0.0) throw RangeError("inverse_profile: negative chart radius");
    if (r_hat == 0.0) return 0.0;
    // end of the increasing branch
    std::size_t peak = 0;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] <= vals[i - 1]) break;
        peak = i;
    }
    const double r_peak =
        p.r_hat_.x_front() +
        (p.r_hat_.x_back() - p.r_hat_.x_front()) * static_cast<double>(peak) /
            static_cast<double>(vals.size() - 1);
    if (r_hat > vals[peak] + 1e-12)
        throw RangeError("inverse_profile: chart radius outside profile range");
    double lo = 0.0, hi = std::min(r_peak, p.r_hat_.x_back());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p.r_hat_(mid) < r_hat ? lo : hi) = mid;
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

inline double differential_slip(const RadialProfile& p, double r) {
    return p.slip(r);
}

// Point in the flat synthetic plane (Euclidean length units).
struct SyntheticPoint {
    Vec2 components;
    double norm() const { return components.norm(); }
};

// The distortion as a point map: radial contraction r -> r'(r) followed
// by the exponential map, which for a radially symmetric chart is the
// radial placement at chart radius r_hat(r).
inline ChartPoint theta_map(const RadialProfile& p, const NormalFrame& frame,
                            SyntheticPoint s) {
    const double r = s.norm();
    if (r > p.r_max() + 1e-12 || r > p.r_solved() + 1e-12)
        throw RangeError("theta_map: synthetic radius past r_max");
    if (r < 1e-300) return frame.origin;
    const double rh = p.r_hat(std::min(r, p.r_solved()));
    const Vec2 chart_dir = frame.chart_vector(s.components / r);
    const double n = chart_dir.norm();
    return frame.origin.offset(chart_dir * (rh / n));
}

// Pointwise linear map with kappa kappa^T = g^{-1}: columns are the
// g-unit radial and tangential vectors at the point (radially aligned
// orthonormal gauge). Continuously extended by the identity at the
// origin, where the polar frame degenerates.
struct KappaField {
    const MetricField* metric = nullptr;
    ChartPoint origin;
};

inline KappaField make_kappa_field(const MetricField& m,
                                   ChartPoint origin = {0.0, 0.0}) {
    if (!m.radial_symmetry)
        throw DomainError("KappaField: metric has no radial symmetry data");
    if (origin.radius() > 1e-12)
        throw DomainError("KappaField: origin must be the chart origin");
    return {&m, origin};
}

inline Mat2 kappa_matrix(const KappaField& k, ChartPoint q) {
    const Vec2 d = q.vec() - k.origin.vec();
    const double r = d.norm();
    if (r < 1e-14) return Mat2::identity();
    const MetricField& m = *k.metric;
    const Mat2 g = metric_at(m, q);
    const Vec2 e_r = d / r;
    const Vec2 e_t = e_r.perp();
    const Vec2 u_r = e_r / std::sqrt(e_r.dot(g * e_r));
    const Vec2 u_t = e_t / std::sqrt(e_t.dot(g * e_t));
    return Mat2::from_columns(u_r, u_t);
}

inline Vec2 kappa_apply(const KappaField& k, ChartPoint q, Vec2 v) {
    return kappa_matrix(k, q) * v;
}

// Renormalized curve transportation: pushes a Euclidean unit-speed curve
// through the distortion and reparametrizes the image to g-unit speed.
inline GeodesicCurve renormalized_transport(const MetricField& m,
                                            const RadialProfile& p,
                                            const NormalFrame& frame,
                                            const std::function<Vec2(double)>& c,
                                            double s_max, int n_samples) {
    if (n_samples < 2) throw StepError("renormalized_transport: n_samples < 2");
    if (!(s_max > 0.0)) throw StepError("renormalized_transport: s_max <= 0");

    const auto image = [&](double s) {
        return theta_map(p, frame, SyntheticPoint{c(s)});
    };
    // step at the rounding/truncation balance point of the central
    // difference; the cumulative length inherits any systematic bias
    const double fd = 3e-6 * std::max(1.0, s_max);
    const auto velocity = [&](double s) {
        const double a = std::max(s - fd, 0.0), b = std::min(s + fd, s_max);
        const Vec2 dv = image(b).vec() - image(a).vec();
        return dv / (b - a);
    };

    const auto speed_at = [&](double s) { return g_norm(m, image(s), velocity(s)); };

    const int n_fine = std::max(4 * n_samples, 256);
    const double hs = s_max / n_fine;
    std::vector<double> w(static_cast<std::size_t>(n_fine) + 1);
    for (int i = 0; i <= n_fine; ++i) w[static_cast<std::size_t>(i)] = speed_at(hs * i);
    // cumulative g-length, Simpson per cell
    std::vector<double> t_of_s(w.size());
    t_of_s[0] = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double mid = speed_at(hs * (static_cast<double>(i) - 0.5));
        t_of_s[i] = t_of_s[i - 1] + hs / 6.0 * (w[i - 1] + 4.0 * mid + w[i]);
    }
    UniformPchip t_table(0.0, hs, t_of_s);

    const double t_total = t_of_s.back();
    GeodesicCurve out;
    out.metric = &m;
    out.param.reserve(n_samples);
    out.points.reserve(n_samples);
    out.tangents.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double t = t_total * j / (n_samples - 1);
        // invert t(s) by bisection on the monotone table, run to machine
        // convergence (downstream stencils amplify placement noise)
        double lo = 0.0, hi = s_max;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (t_table(mid) < t ? lo : hi) = mid;
        }
        const double s = 0.5 * (lo + hi);
        const ChartPoint pt = image(s);
        const Vec2 dgds = velocity(s);
        const double speed = g_norm(m, pt, dgds);
        out.param.push_back(t);
        out.points.push_back(pt);
        out.tangents.push_back(dgds / speed);
    }
    return out;
}

} // namespace riemann2d
