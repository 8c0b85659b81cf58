#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "riemann2d/charts.hpp"
#include "riemann2d/csv.hpp"
#include "riemann2d/distortion.hpp"
#include "riemann2d/geodesic.hpp"
#include "riemann2d/metric.hpp"
#include "riemann2d/quadrature.hpp"

namespace riemann2d {

// One identity check: the residual, the pinned tolerance and the
// identity the residual measures. passed <=> residual <= tolerance.
struct CheckRecord {
    std::string name;
    std::string paper_ref; // the identity being checked, in words
    double residual = std::numeric_limits<double>::infinity();
    double tolerance = 0.0;
    bool passed = false;
    double runtime_ms = 0.0;
};

struct Resolution {
    int steps = 2000;  // ODE steps per unit arc length / profile steps
    int grid = 100;    // sample counts for check grids
    int quad_n = 512;  // Simpson panels for volume quadrature
};

struct VerificationReport {
    std::string manifold;
    Resolution parameters;
    std::vector<CheckRecord> checks;

    bool passed_all() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

namespace detail {

// splitmix64-based uniform doubles; deterministic across platforms.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}
    double uniform() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

inline CheckRecord timed(const std::string& name, const std::string& identity,
                         double tolerance, const std::function<double()>& body) {
    CheckRecord rec;
    rec.name = name;
    rec.paper_ref = identity;
    rec.tolerance = tolerance;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        rec.residual = body();
    } catch (const std::exception& e) {
        rec.residual = std::numeric_limits<double>::infinity();
        rec.paper_ref += " [error: " + std::string(e.what()) + "]";
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.passed = rec.residual <= rec.tolerance;
    return rec;
}

} // namespace detail

// Classical Gauss lemma, radial statement, in both of its testable
// forms: the radial image curve of the exponential map has unit g-speed
// at every integration node, and the differential of the chart-composed
// exponential map sends the radial unit vector to a g-unit vector
// (measured by central differences across neighboring radii on the
// same trajectory).
inline CheckRecord check_gauss_classical(const MetricField& m,
                                         const NormalFrame& frame, Vec2 direction,
                                         const std::vector<double>& r_grid,
                                         int steps_per_unit = 2000) {
    return detail::timed(
        "gauss_radial_speed", "radial exponential images have unit g-speed",
        1e-6, [&]() {
            const Vec2 chart_v = frame.chart_vector(direction);
            const Vec2 u = chart_v / g_norm(m, frame.origin, chart_v);
            const double t_max = r_grid.back();
            const int n = std::max(
                2, static_cast<int>(std::ceil(t_max * steps_per_unit)));
            const GeodesicCurve c = geodesic_shoot(m, frame, u, t_max, n);
            double worst = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i)
                worst = std::max(worst, std::abs(g_speed(c, i) - 1.0));

            // second form: D(h o exp) on the radial unit vector
            std::vector<double> targets;
            targets.reserve(3 * r_grid.size());
            for (double t : r_grid) {
                const double delta = 1e-4 * std::max(1.0, t);
                targets.push_back(std::max(t - delta, 0.0));
                targets.push_back(t);
                targets.push_back(t + delta);
            }
            const auto states =
                detail::shoot_capture(m, frame.origin, u, targets, steps_per_unit);
            for (std::size_t k = 0; k < r_grid.size(); ++k) {
                const auto& lo = states[3 * k];
                const auto& at = states[3 * k + 1];
                const auto& hi = states[3 * k + 2];
                const double span = targets[3 * k + 2] - targets[3 * k];
                const Vec2 der{(hi[0] - lo[0]) / span, (hi[1] - lo[1]) / span};
                const ChartPoint pt{at[0], at[1]};
                worst = std::max(worst, std::abs(g_norm(m, pt, der) - 1.0));
            }
            return worst;
        });
}

// Segment volume equality: the flat annular-segment volume in synthetic
// coordinates against the quadrature of l' g(l') between the mapped radii.
inline CheckRecord check_segment_volume(const RadialProfile& p, double r_lo,
                                        double r_hi, double dphi, int quad_n) {
    return detail::timed(
        "segment_volume",
        "annular segment volume equals its flat preimage volume", 1e-6, [&]() {
            const double lhs = 0.5 * dphi * (r_hi * r_hi - r_lo * r_lo);
            const double rp_lo = p.r_prime(r_lo), rp_hi = p.r_prime(r_hi);
            const double rhs =
                dphi * simpson([&](double lp) { return lp * p.g_of_r_prime(lp); },
                               rp_lo, rp_hi, quad_n);
            return std::abs(lhs - rhs) / std::abs(rhs);
        });
}

// pi r_max^2 against the Riemannian area of the image region. The area
// integrand is taken in the arc-length variable, where the chart's
// boundary singularity disappears.
inline CheckRecord check_total_volume(const RadialProfile& p,
                                      const LengthProfile& lp, int quad_n,
                                      const std::string& name = "total_volume") {
    return detail::timed(
        name, "pi r_max^2 equals the image area", 1e-6, [&]() {
            const double area =
                2.0 * M_PI *
                simpson([&](double rp) { return lp.r_hat(rp); }, 0.0,
                        lp.r_prime_end(), std::max(quad_n, 512));
            const double flat = M_PI * p.r_max() * p.r_max();
            return std::abs(flat - area) / area;
        });
}

// Same comparison continued past the chart to the cut radius, using the
// warp profile as the radial volume element source.
inline CheckRecord check_total_volume_extended(const MetricField& m,
                                               const Resolution& res) {
    return detail::timed(
        "total_volume_extended",
        "pi r_max^2 equals the area up to the cut radius", 1e-6, [&]() {
            const auto& rs = *m.radial_symmetry;
            const auto g_fn = [&rs](double rp) {
                return rp < 1e-12 ? 1.0 : rs.warp(rp) / rp;
            };
            const RadialProfile ext = solve_volume_preserving(
                g_fn, rs.warp_domain_end, std::numeric_limits<double>::infinity(),
                std::max(res.steps, 2000));
            const double area =
                2.0 * M_PI *
                simpson(rs.warp, 0.0, rs.warp_domain_end, std::max(res.quad_n, 512));
            const double flat = M_PI * ext.r_max() * ext.r_max();
            return std::abs(flat - area) / area;
        });
}

// Finite-epsilon delta-family convergence: mass of the scaled bump under
// the image measure of the Lebesgue measure, computed as
//   I(eps) = integral of bump_eps(y) |det D(Theta^{-1} o exp_q)(y)| dy
// over the bump support in normal coordinates at q.
struct MollifierTrend {
    std::vector<double> eps;
    std::vector<double> mass;
};

// The default bump is exp(1/(u^2-1)) on the unit disk; any continuous
// radial profile supported in [0, 1) may be passed instead. It is
// normalized with the same radial rule used in the mass quadrature.
inline MollifierTrend mollifier_masses(const MetricField& m, const RadialProfile& p,
                                       const NormalFrame& frame, ChartPoint q,
                                       const std::vector<double>& eps_list,
                                       int n_r = 32, int n_phi = 48,
                                       int steps_per_unit = 400,
                                       std::function<double(double)> bump_profile = {}) {
    const std::function<double(double)> bump =
        bump_profile ? std::move(bump_profile) : [](double u) {
            return u < 1.0 ? std::exp(1.0 / (u * u - 1.0)) : 0.0;
        };
    const double norm =
        2.0 * M_PI * simpson([&](double u) { return bump(u) * u; }, 0.0, 1.0, n_r);

    const NormalFrame frame_q = make_normal_frame(m, q);
    const auto theta_inverse = [&](ChartPoint z) {
        const Vec2 d = z.vec() - frame.origin.vec();
        const double rh = d.norm();
        if (rh < 1e-300) return Vec2{0.0, 0.0};
        return d * (inverse_profile(p, rh) / rh);
    };
    const auto F = [&](Vec2 y) {
        ChartPoint z;
        try {
            z = exp_map(m, frame_q, y, steps_per_unit);
        } catch (const DomainEscapeError&) {
            throw SupportEscapeError("mollifier support leaves the chart");
        }
        return theta_inverse(z);
    };

    MollifierTrend out;
    for (double eps : eps_list) {
        const double fd = 1e-4 * eps;
        const auto density = [&](double rho, double alpha) {
            const Vec2 y = Vec2{std::cos(alpha), std::sin(alpha)} * rho;
            const Vec2 dx = (F(y + Vec2{fd, 0.0}) - F(y - Vec2{fd, 0.0})) / (2.0 * fd);
            const Vec2 dy = (F(y + Vec2{0.0, fd}) - F(y - Vec2{0.0, fd})) / (2.0 * fd);
            return std::abs(dx.x * dy.y - dx.y * dy.x);
        };
        const double mass =
            periodic_trapezoid(
                [&](double alpha) {
                    return simpson(
                        [&](double rho) {
                            if (rho < 1e-14) return 0.0;
                            const double w = bump(rho / eps) / (eps * eps * norm);
                            return w * density(rho, alpha) * rho;
                        },
                        0.0, eps, n_r);
                },
                2.0 * M_PI, n_phi);
        out.eps.push_back(eps);
        out.mass.push_back(mass);
    }
    return out;
}

inline CheckRecord check_mollifier_delta(const MetricField& m,
                                         const RadialProfile& p,
                                         const NormalFrame& frame, ChartPoint q,
                                         const std::vector<double>& eps_list,
                                         const std::string& name,
                                         int steps_per_unit = 400) {
    return detail::timed(
        name, "scaled bump mass tends to 1 under the image measure", 1e-2,
        [&]() {
            const MollifierTrend tr =
                mollifier_masses(m, p, frame, q, eps_list, 32, 48, steps_per_unit);
            double residual = std::abs(tr.mass.back() - 1.0);
            for (std::size_t i = 1; i < tr.mass.size(); ++i) {
                const double grow = std::abs(tr.mass[i] - 1.0) -
                                    std::abs(tr.mass[i - 1] - 1.0);
                residual = std::max(residual, grow);
            }
            return residual;
        });
}

// kappa kappa^T = g^{-1} over sampled chart points.
inline CheckRecord check_kappa_gauge(const MetricField& m, const KappaField& k,
                                     int sample_n, double radius_cap) {
    return detail::timed(
        "kappa_gauge", "kappa kappa^T equals the inverse metric", 1e-8, [&]() {
            detail::DetRng rng(0x6b617070u);
            double worst = 0.0;
            for (int i = 0; i < sample_n; ++i) {
                const double rho = radius_cap * std::sqrt(rng.uniform());
                const double ang = rng.uniform(0.0, 2.0 * M_PI);
                const ChartPoint q{rho * std::cos(ang), rho * std::sin(ang)};
                const Mat2 kap = kappa_matrix(k, q);
                const Mat2 resid =
                    kap * kap.transpose() - inverse_metric_at(m, q);
                worst = std::max(worst, resid.max_abs());
            }
            return worst;
        });
}

// The radially aligned kappa is a genuinely different factor from the
// symmetric square root of g^{-1} away from the coordinate axes.
inline CheckRecord check_kappa_not_symmetric_root(const MetricField& m,
                                                  const KappaField& k,
                                                  ChartPoint off_axis) {
    return detail::timed(
        "kappa_not_symmetric_root",
        "radial-gauge kappa differs from the symmetric root off-axis", 0.5,
        [&]() {
            const Mat2 kap = kappa_matrix(k, off_axis);
            const Mat2 root = sym_sqrt(inverse_metric_at(m, off_axis));
            const double diff = (kap - root).max_abs();
            return diff > 1e-9 ? 0.0 : 1.0;
        });
}

namespace detail {

inline CheckRecord check_metric_sanity(const MetricField& m, double radius_cap,
                                       bool radial, int samples) {
    return timed(
        "metric_sanity",
        "metric symmetric positive definite; inverse is a two-sided inverse",
        1e-10, [&]() {
            DetRng rng(0x6d657472u);
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                ChartPoint q;
                if (radial) {
                    const double rho = radius_cap * std::sqrt(rng.uniform());
                    const double ang = rng.uniform(0.0, 2.0 * M_PI);
                    q = {rho * std::cos(ang), rho * std::sin(ang)};
                } else {
                    q = {rng.uniform(0.05, 0.95), rng.uniform(0.0, 6.0)};
                }
                const Mat2 g = metric_at(m, q);
                worst = std::max(worst, std::abs(g.b - g.c));
                if (sym_eigenvalues(g)[0] <= 0.0) return 1.0;
                const Mat2 prod = g * inverse_metric_at(m, q);
                worst = std::max(worst, (prod - Mat2::identity()).max_abs());
            }
            return worst;
        });
}

inline CheckRecord check_rk4_order(const MetricField& m, const NormalFrame& frame,
                                   Vec2 unit_v, double t_max) {
    return timed("rk4_order", "geodesic endpoint error contracts at fourth order",
                 0.0, [&]() {
                     const int base = 25;
                     const auto endpoint = [&](int per_unit) {
                         const int n = std::max(
                             2, static_cast<int>(std::ceil(t_max * per_unit)));
                         return geodesic_shoot(m, frame, unit_v, t_max, n)
                             .back()
                             .vec();
                     };
                     const Vec2 e1 = endpoint(base);
                     const Vec2 e2 = endpoint(2 * base);
                     const Vec2 e4 = endpoint(4 * base);
                     const double d12 = (e1 - e2).norm();
                     const double d24 = (e2 - e4).norm();
                     if (d12 < 1e-13) return 0.0; // integrator exact here
                     return 8.0 - d12 / std::max(d24, 1e-300);
                 });
}

inline CheckRecord check_transport(const MetricField& m, const NormalFrame& frame,
                                   double t_max, int steps_per_unit) {
    return timed(
        "transport_inner_products",
        "parallel transport preserves pairwise g-inner products", 1e-8, [&]() {
            const Vec2 chart_dir = frame.chart_vector({0.8, 0.6});
            const Vec2 u = chart_dir / g_norm(m, frame.origin, chart_dir);
            const int n = std::max(
                2, static_cast<int>(std::ceil(t_max * steps_per_unit)));
            const GeodesicCurve c = geodesic_shoot(m, frame, u, t_max, n);
            const Vec2 w = frame.chart_vector({-0.6, 0.8});
            const auto va = parallel_transport(
                m, c, {frame.origin, u, Variance::contravariant});
            const auto vb = parallel_transport(
                m, c, {frame.origin, w, Variance::contravariant});
            const double aa0 = g_inner(m, frame.origin, u, u);
            const double ab0 = g_inner(m, frame.origin, u, w);
            const double bb0 = g_inner(m, frame.origin, w, w);
            double worst = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                const ChartPoint pt = c.points[i];
                worst = std::max(
                    worst, std::abs(g_inner(m, pt, va[i].components,
                                            va[i].components) - aa0));
                worst = std::max(
                    worst, std::abs(g_inner(m, pt, va[i].components,
                                            vb[i].components) - ab0));
                worst = std::max(
                    worst, std::abs(g_inner(m, pt, vb[i].components,
                                            vb[i].components) - bb0));
            }
            return worst;
        });
}

inline CheckRecord check_exp_log_roundtrip(const MetricField& m,
                                           const NormalFrame& frame,
                                           double r_hat_cap, int steps_per_unit) {
    return timed("exp_log_roundtrip", "radial log inverts the exponential map",
                 1e-8, [&]() {
                     DetRng rng(0x6c6f6721u);
                     double worst = 0.0;
                     for (int i = 0; i < 12; ++i) {
                         const double rho = r_hat_cap * (0.1 + 0.8 * rng.uniform());
                         const double ang = rng.uniform(0.0, 2.0 * M_PI);
                         const ChartPoint q{rho * std::cos(ang),
                                            rho * std::sin(ang)};
                         const Vec2 v =
                             log_map_radial(m, frame, q, 1e-12, steps_per_unit);
                         const ChartPoint back =
                             exp_map(m, frame, v, steps_per_unit);
                         worst = std::max(worst, (back.vec() - q.vec()).norm());
                     }
                     return worst;
                 });
}

// Tolerance matches the renormalized-transport speed contract; the
// residual is limited by profile interpolation near the chart edge.
inline CheckRecord check_radial_isometry_slip(const MetricField& m,
                                              const RadialProfile& p,
                                              const NormalFrame& frame) {
    return timed(
        "radial_isometry_slip",
        "g-speed of the r-parametrized radial image equals the slip", 1e-5,
        [&]() {
            const Vec2 u{std::cos(0.7), std::sin(0.7)};
            const double r_hi = 0.85 * p.r_solved();
            double worst = 0.0;
            for (int i = 1; i <= 40; ++i) {
                const double r = r_hi * i / 40.0;
                const double fd = 1e-5 * std::max(1.0, r);
                const ChartPoint a = theta_map(p, frame, {u * (r - fd)});
                const ChartPoint b = theta_map(p, frame, {u * (r + fd)});
                const Vec2 der = (b.vec() - a.vec()) / (2.0 * fd);
                const ChartPoint mid = theta_map(p, frame, {u * r});
                const double speed = g_norm(m, mid, der);
                worst = std::max(worst, std::abs(speed / p.slip(r) - 1.0));
            }
            return worst;
        });
}

inline CheckRecord check_circle_transport(const MetricField& m,
                                          const RadialProfile& p,
                                          const NormalFrame& frame) {
    return timed(
        "circle_transport_speed",
        "renormalized circle transport runs at unit g-speed with angle t/r_hat",
        1e-5, [&]() {
            double worst = 0.0;
            for (double frac : {0.35, 0.7}) {
                const double r = frac * p.r_solved();
                const double phi0 = 0.3;
                const auto circle = [&](double s) {
                    return Vec2{r * std::cos(s / r + phi0),
                                r * std::sin(s / r + phi0)};
                };
                const double s_max = 1.5 * r;
                const int n = 600;
                const GeodesicCurve out = renormalized_transport(
                    m, p, frame, circle, s_max, n);
                const double rh = p.r_hat(r);
                const double dt = out.param[1] - out.param[0];
                for (int j = 2; j + 2 < n; ++j) {
                    // fourth-order five-point first derivative
                    const Vec2 fd = (out.points[j - 2].vec() -
                                     out.points[j + 2].vec() +
                                     (out.points[j + 1].vec() -
                                      out.points[j - 1].vec()) *
                                         8.0) /
                                    (12.0 * dt);
                    worst = std::max(
                        worst,
                        std::abs(g_norm(m, out.points[j], fd) - 1.0));
                    // angle advances as t / r_hat on the image circle
                    const double ang = std::atan2(out.points[j].y,
                                                  out.points[j].x);
                    double expect = phi0 + out.param[j] / rh;
                    double diff = std::remainder(ang - expect, 2.0 * M_PI);
                    worst = std::max(worst, std::abs(diff));
                    worst = std::max(
                        worst, std::abs(out.points[j].radius() - rh));
                }
            }
            return worst;
        });
}

inline CheckRecord check_theta_ray(const MetricField& m, const RadialProfile& p,
                                   const NormalFrame& frame, int steps_per_unit) {
    return timed(
        "theta_ray_on_geodesic", "distortion maps rays onto radial geodesics",
        1e-6, [&]() {
            const Vec2 coeff{std::cos(1.1), std::sin(1.1)};
            const double r_hi = 0.9 * p.r_solved();
            std::vector<double> targets;
            for (int i = 1; i <= 10; ++i)
                targets.push_back(p.r_prime(r_hi * i / 10.0));
            const Vec2 chart_dir = frame.chart_vector(coeff);
            const Vec2 u = chart_dir / g_norm(m, frame.origin, chart_dir);
            const auto states = detail::shoot_capture(m, frame.origin, u, targets,
                                                      steps_per_unit);
            double worst = 0.0;
            for (int i = 1; i <= 10; ++i) {
                const double r = r_hi * i / 10.0;
                const ChartPoint via_theta = theta_map(p, frame, {coeff * r});
                const Vec2 via_geo{states[i - 1][0], states[i - 1][1]};
                worst = std::max(worst, (via_theta.vec() - via_geo).norm());
            }
            return worst;
        });
}

inline CheckRecord check_slip_origin(const RadialProfile& p) {
    // radii small enough that the true quadratic deviation sits below
    // the tolerance
    return timed("slip_origin_limit", "differential slip tends to 1 at the origin",
                 1e-6, [&]() {
                     double worst = 0.0;
                     for (double r : {1e-4, 1e-3})
                         worst = std::max(worst, std::abs(p.slip(r) - 1.0));
                     return worst;
                 });
}

inline CheckRecord check_inverse_roundtrip(const RadialProfile& p) {
    return timed("profile_inverse_roundtrip", "profile inversion is the identity",
                 1e-8, [&]() {
                     double worst = 0.0;
                     const double r_hi = 0.98 * p.r_solved();
                     for (int i = 0; i <= 100; ++i) {
                         const double r = r_hi * i / 100.0;
                         const double back = inverse_profile(p, p.r_hat(r));
                         worst = std::max(worst, std::abs(back - r));
                     }
                     return worst;
                 });
}

} // namespace detail

// Runs every applicable check for the metric at the given resolution.
// Checks never abort the suite; failures are recorded with their
// residuals. Deterministic for a fixed resolution.
inline VerificationReport run_suite(const MetricField& m, const Resolution& res) {
    VerificationReport report;
    report.manifold = m.name;
    report.parameters = res;

    const bool radial =
        m.radial_symmetry.has_value() &&
        m.domain(ChartPoint{0.0, 0.0});

    if (!radial) {
        // charts without radial structure get the frame-level checks only
        const ChartPoint base{0.5, 0.77};
        report.checks.push_back(detail::check_metric_sanity(m, 0.0, false, 1000));
        const NormalFrame fr = make_normal_frame(m, base);
        const Vec2 dir = fr.chart_vector({0.6, 0.8});
        std::vector<double> grid;
        for (int i = 1; i <= res.grid; ++i) grid.push_back(0.2 * i / res.grid);
        report.checks.push_back(
            check_gauss_classical(m, fr, {0.6, 0.8}, grid, res.steps));
        report.checks.push_back(
            detail::check_rk4_order(m, fr, dir / g_norm(m, base, dir), 0.2));
        report.checks.push_back(detail::check_transport(m, fr, 0.2, res.steps));
        return report;
    }

    const NormalFrame frame = make_normal_frame(m, {0.0, 0.0});
    const auto& rs = *m.radial_symmetry;

    double limit = std::numeric_limits<double>::infinity();
    if (!std::isfinite(rs.chart_radius_max)) limit = 4.0;
    const LengthProfile lp = solve_length_preserving(
        rs.radial_component, rs.chart_radius_max, std::max(res.steps, 64), limit);
    const RadialProfile profile = solve_volume_preserving(
        radial_volume_element(lp), lp.r_prime_end(),
        std::numeric_limits<double>::infinity(), std::max(res.steps, 64));

    const double r_hat_cap = lp.r_hat_end();
    const double t_geo = 0.9 * lp.r_prime_end();

    report.checks.push_back(
        detail::check_metric_sanity(m, 0.97 * r_hat_cap, true, 1000));

    std::vector<double> r_grid;
    for (int i = 1; i <= res.grid; ++i)
        r_grid.push_back(t_geo * i / res.grid);
    report.checks.push_back(
        check_gauss_classical(m, frame, {1.0, 0.0}, r_grid, res.steps));
    report.checks.push_back(
        check_gauss_classical(m, frame, {0.28, 0.96}, r_grid, res.steps));

    const Vec2 dir = frame.chart_vector({1.0, 0.0});
    report.checks.push_back(detail::check_rk4_order(
        m, frame, dir / g_norm(m, frame.origin, dir), std::min(1.0, t_geo)));
    report.checks.push_back(detail::check_transport(m, frame, t_geo, res.steps));
    report.checks.push_back(detail::check_exp_log_roundtrip(
        m, frame, 0.9 * r_hat_cap, res.steps));
    report.checks.push_back(detail::check_slip_origin(profile));
    report.checks.push_back(detail::check_inverse_roundtrip(profile));
    report.checks.push_back(
        detail::check_radial_isometry_slip(m, profile, frame));
    report.checks.push_back(detail::check_theta_ray(m, profile, frame, res.steps));
    report.checks.push_back(detail::check_circle_transport(m, profile, frame));

    {
        detail::DetRng rng(0x7365676dull);
        double worst = 0.0;
        CheckRecord agg;
        for (int i = 0; i < 10; ++i) {
            const double a = rng.uniform(0.05, 0.9) * profile.r_solved();
            const double b =
                std::min(a + rng.uniform(0.05, 0.4) * profile.r_solved(),
                         0.97 * profile.r_solved());
            const double dphi = rng.uniform(0.3, 2.0 * M_PI);
            const CheckRecord rec =
                check_segment_volume(profile, a, b, dphi, res.quad_n);
            worst = std::max(worst, rec.residual);
            agg.runtime_ms += rec.runtime_ms;
            agg.name = rec.name;
            agg.paper_ref = rec.paper_ref;
            agg.tolerance = rec.tolerance;
        }
        agg.residual = worst;
        agg.passed = agg.residual <= agg.tolerance;
        report.checks.push_back(agg);
    }

    report.checks.push_back(check_total_volume(profile, lp, res.quad_n));
    if (rs.warp_domain_end > lp.r_prime_end() * (1.0 + 1e-9) &&
        std::isfinite(rs.warp_domain_end))
        report.checks.push_back(check_total_volume_extended(m, res));

    const std::vector<double> eps_list{0.2, 0.1, 0.05};
    const int moll_steps = std::max(50, res.steps / 5);
    report.checks.push_back(check_mollifier_delta(
        m, profile, frame, {0.0, 0.0}, eps_list, "mollifier_delta_origin",
        moll_steps));
    report.checks.push_back(check_mollifier_delta(
        m, profile, frame, {0.5 * r_hat_cap, 0.0}, eps_list,
        "mollifier_delta_offcenter", moll_steps));

    const KappaField kf = make_kappa_field(m);
    report.checks.push_back(check_kappa_gauge(m, kf, 500, 0.97 * r_hat_cap));
    report.checks.push_back(check_kappa_not_symmetric_root(
        m, kf, {0.4 * r_hat_cap, 0.3 * r_hat_cap}));

    return report;
}

inline VerificationReport run_suite(const nlohmann::json& spec,
                                    const Resolution& res) {
    const MetricField m = metric_from_spec(spec);
    return run_suite(m, res);
}

namespace detail {

// JSON has no infinity literal; an errored check's residual serializes
// as a sentinel that still compares above every tolerance.
inline std::string format_residual(double v) {
    if (!std::isfinite(v)) return "9.999999999e+307";
    return format_sig10(v);
}

} // namespace detail

// Machine form; field order and number formatting are stable so that
// identical inputs give byte-identical reports.
inline void write_report_json(std::ostream& os, const VerificationReport& r) {
    os << "{\n  \"manifold\": \"" << r.manifold << "\",\n";
    os << "  \"parameters\": {\"steps\": " << r.parameters.steps
       << ", \"grid\": " << r.parameters.grid
       << ", \"quad_n\": " << r.parameters.quad_n << "},\n";
    os << "  \"checks\": [\n";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const auto& c = r.checks[i];
        os << "    {\"name\": \"" << c.name << "\", \"paper_ref\": \""
           << c.paper_ref << "\", \"residual\": " << detail::format_residual(c.residual)
           << ", \"tolerance\": " << format_sig10(c.tolerance)
           << ", \"passed\": " << (c.passed ? "true" : "false") << "}"
           << (i + 1 < r.checks.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"passed_all\": " << (r.passed_all() ? "true" : "false")
       << "\n}\n";
}

// Human form: aligned columns, one line per check.
inline void write_report_text(std::ostream& os, const VerificationReport& r) {
    os << "manifold: " << r.manifold << "  (steps=" << r.parameters.steps
       << ", grid=" << r.parameters.grid << ", quad_n=" << r.parameters.quad_n
       << ")\n";
    std::size_t name_w = 4;
    for (const auto& c : r.checks) name_w = std::max(name_w, c.name.size());
    for (const auto& c : r.checks) {
        os << (c.passed ? "PASS  " : "FAIL  ") << c.name
           << std::string(name_w - c.name.size() + 2, ' ')
           << "residual=" << format_sig10(c.residual)
           << "  tolerance=" << format_sig10(c.tolerance) << "  [" << c.paper_ref
           << "]\n";
    }
    os << (r.passed_all() ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
}

inline void write_report_csv(std::ostream& os, const VerificationReport& r) {
    os << "name,paper_ref,residual,tolerance,passed\n";
    for (const auto& c : r.checks)
        os << c.name << "," << c.paper_ref << ","
           << detail::format_residual(c.residual)
           << "," << format_sig10(c.tolerance) << ","
           << (c.passed ? "true" : "false") << "\n";
}

} // namespace riemann2d
