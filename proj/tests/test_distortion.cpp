#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "riemann2d/charts.hpp"
#include "riemann2d/distortion.hpp"
#include "riemann2d/quadrature.hpp"

using namespace riemann2d;

namespace {

double sphere_grr(double rh) { return 1.0 / (1.0 - rh * rh); }
double poincare_grr(double rh) { return 1.0 / (1.0 + rh * rh); }

const NormalFrame kStdFrame{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};

} // namespace

TEST(SolveLengthPreserving, EuclideanIdentity) {
    const LengthProfile lp =
        solve_length_preserving([](double) { return 1.0; }, 10.0, 500, 2.0);
    for (int i = 0; i <= 20; ++i) {
        const double rp = 2.0 * i / 20.0;
        EXPECT_NEAR(lp.r_hat(rp), rp, 1e-12);
    }
}

TEST(SolveLengthPreserving, SphereIsSine) {
    const LengthProfile lp = solve_length_preserving(sphere_grr, 1.0, 2000);
    EXPECT_NEAR(lp.r_prime_end(), M_PI / 2.0, 1e-8);
    EXPECT_NEAR(lp.r_hat(M_PI / 4.0), std::sqrt(2.0) / 2.0, 1e-9);
    EXPECT_NEAR(lp.r_hat_end(), 1.0, 1e-6);
    EXPECT_NEAR(lp.r_prime_of(std::sin(0.7)), 0.7, 1e-9);
    for (int i = 0; i <= 50; ++i) {
        const double rp = 1.5 * i / 50.0;
        EXPECT_NEAR(lp.r_hat(rp), std::sin(rp), 1e-8);
    }
}

TEST(SolveLengthPreserving, PoincareStyleIsSinh) {
    // dr_hat/dr' = sqrt(1 + r_hat^2) integrates to sinh
    const LengthProfile lp = solve_length_preserving(poincare_grr, 10.0, 2000, 2.0);
    for (int i = 1; i <= 20; ++i) {
        const double rp = 2.0 * i / 20.0;
        const double rh = lp.r_hat(rp);
        EXPECT_NEAR(rh, std::sinh(rp), 1e-8);
        // independent quadrature oracle: r' = integral of 1/sqrt(1+s^2)
        const double oracle = simpson(
            [](double s) { return 1.0 / std::sqrt(1.0 + s * s); }, 0.0, rh, 512);
        EXPECT_NEAR(oracle, rp, 1e-9);
    }
}

TEST(SolveLengthPreserving, SingularInputThrows) {
    EXPECT_THROW(solve_length_preserving([](double rh) { return 0.5 - rh; }, 1.0,
                                         200, 2.0),
                 SingularityError);
}

TEST(SolveVolumePreserving, FlatProfileIsIdentity) {
    const RadialProfile p = solve_volume_preserving(
        [](double) { return 1.0; }, 3.0, 2.5, 500);
    for (int i = 0; i <= 20; ++i) {
        const double r = 2.5 * i / 20.0;
        EXPECT_NEAR(p.r_prime(r), r, 1e-12);
        EXPECT_NEAR(p.r_hat(r), r, 1e-12);
        if (i > 0) {
            EXPECT_NEAR(p.slip(r), 1.0, 1e-12);
        }
    }
}

TEST(SolveVolumePreserving, SphereClosedForm) {
    // separable form: cos r' = 1 - r^2/2, r_hat = r sqrt(1 - r^2/4)
    const RadialProfile p =
        solve_volume_preserving(sin_over_x, M_PI / 2.0, 1.4, 2000);
    for (int i = 0; i <= 100; ++i) {
        const double r = 1.4 * i / 100.0;
        EXPECT_NEAR(p.r_prime(r), std::acos(1.0 - 0.5 * r * r), 1e-8);
        EXPECT_NEAR(p.r_hat(r), r * std::sqrt(1.0 - 0.25 * r * r), 1e-8);
    }
    EXPECT_NEAR(p.r_prime(1.0), M_PI / 3.0, 1e-10);
    EXPECT_NEAR(p.r_hat(1.0), std::sqrt(3.0) / 2.0, 1e-10);
}

TEST(SolveVolumePreserving, HyperbolicSeparableOracle) {
    const RadialProfile p =
        solve_volume_preserving(sinh_over_x, 3.0, 2.0, 2000);
    for (int i = 1; i <= 20; ++i) {
        const double r = 2.0 * i / 20.0;
        const double rp = p.r_prime(r);
        // separable-ODE oracle: 2 (cosh r' - 1) = r^2 by quadrature
        const double lhs = 2.0 * simpson([](double s) { return std::sinh(s); },
                                         0.0, rp, 512);
        EXPECT_NEAR(lhs, r * r, 1e-8);
        EXPECT_NEAR(p.r_hat(r), r * std::sqrt(1.0 + 0.25 * r * r), 1e-8);
    }
    EXPECT_NEAR(p.r_hat(1.0), std::sqrt(1.25), 1e-9);
}

TEST(SolveVolumePreserving, TangencyAtOrigin) {
    // (r_hat - r) / r^3 stays bounded as r -> 0 (slip -> 1)
    const RadialProfile p =
        solve_volume_preserving(sin_over_x, M_PI / 2.0, 1.0, 2000);
    for (double r : {1e-3, 1e-2, 0.1}) {
        const double ratio = (p.r_hat(r) - r) / (r * r * r);
        EXPECT_LT(std::abs(ratio), 1.0);
    }
    EXPECT_NEAR((p.r_hat(0.1) - 0.1) / 1e-3, -0.125, 5e-3);
}

TEST(SolveVolumePreserving, SphereHalfChartRmax) {
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    EXPECT_NEAR(p.r_max(), std::sqrt(2.0), 1e-9);
    EXPECT_FALSE(p.singular_end());
    EXPECT_NEAR(p.r_solved(), std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(p.r_hat(p.r_solved()), 1.0, 1e-8);
}

TEST(SolveVolumePreserving, SphereFullCutLocusRmax) {
    // continued to the cut radius: cos r' = 1 - r^2/2 at r' = pi gives r = 2
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI, std::numeric_limits<double>::infinity(), 2000);
    EXPECT_NEAR(p.r_max(), 2.0, 1e-9);
    EXPECT_TRUE(p.singular_end());
    EXPECT_THROW(p.slip(1.999), RangeError); // past the solved span
}

TEST(SolveVolumePreserving, BadInputs) {
    EXPECT_THROW(solve_volume_preserving([](double) { return 1.0; }, 1.0, 1.0, 1),
                 StepError);
    EXPECT_THROW(solve_volume_preserving([](double) { return 2.0; }, 1.0, 1.0, 100),
                 std::invalid_argument);
}

TEST(InverseProfile, SphereClosedFormInverse) {
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    EXPECT_NEAR(inverse_profile(p, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(inverse_profile(p, 1.0), std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(inverse_profile(p, std::sqrt(3.0) / 2.0), 1.0, 1e-8);
    // closed form r(r_hat) = sqrt(2) sqrt(1 - sqrt(1 - r_hat^2))
    for (double rh : {0.1, 0.4, 0.75, 0.95}) {
        const double expect =
            std::sqrt(2.0) * std::sqrt(1.0 - std::sqrt(1.0 - rh * rh));
        EXPECT_NEAR(inverse_profile(p, rh), expect, 1e-8);
    }
    EXPECT_THROW(inverse_profile(p, 1.5), RangeError);
}

TEST(InverseProfile, RoundTripIdentity) {
    const RadialProfile p =
        solve_volume_preserving(sinh_over_x, 3.0, 2.0, 2000);
    for (int i = 0; i <= 100; ++i) {
        const double r = 0.98 * p.r_solved() * i / 100.0;
        EXPECT_NEAR(inverse_profile(p, p.r_hat(r)), r, 1e-8);
    }
}

TEST(DifferentialSlip, SphereClosedForm) {
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    EXPECT_NEAR(differential_slip(p, 1.0), 2.0 / std::sqrt(3.0), 1e-9);
    EXPECT_NEAR(differential_slip(p, 1e-4), 1.0, 1e-8);
    EXPECT_NEAR(differential_slip(p, 1e-9), 1.0, 1e-12);
    // r / sin(r') closed form at another radius
    EXPECT_NEAR(differential_slip(p, 0.5),
                0.5 / std::sin(std::acos(1.0 - 0.125)), 1e-9);
    EXPECT_THROW(differential_slip(p, p.r_max() + 0.05), RangeError);
}

TEST(DifferentialSlip, EuclideanIsUnity) {
    const RadialProfile p =
        solve_volume_preserving([](double) { return 1.0; }, 4.0, 3.0, 400);
    for (double r : {0.0, 0.7, 1.9, 2.9}) {
        if (r == 0.0) continue;
        EXPECT_NEAR(differential_slip(p, r), 1.0, 1e-12);
    }
}

TEST(ThetaMap, OriginAndClosedFormRadii) {
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    const ChartPoint at_zero = theta_map(p, kStdFrame, {{0.0, 0.0}});
    EXPECT_NEAR(at_zero.x, 0.0, 1e-15);

    const ChartPoint unit = theta_map(p, kStdFrame, {{1.0, 0.0}});
    EXPECT_NEAR(unit.x, std::sqrt(3.0) / 2.0, 1e-9);
    EXPECT_NEAR(unit.y, 0.0, 1e-15);

    // the synthetic boundary radius sqrt(2) lands on the equator
    const ChartPoint equator =
        theta_map(p, kStdFrame, {{std::sqrt(2.0), 0.0}});
    EXPECT_NEAR(equator.x, 1.0, 1e-8);

    EXPECT_THROW(theta_map(p, kStdFrame, {{1.6, 0.0}}), RangeError);
}

TEST(ThetaMap, OffAxisDirectionPreserved) {
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    const Vec2 s{0.6, 0.8};
    const ChartPoint q = theta_map(p, kStdFrame, {s});
    const double rh = p.r_hat(1.0);
    EXPECT_NEAR(q.x, rh * 0.6, 1e-10);
    EXPECT_NEAR(q.y, rh * 0.8, 1e-10);
}

TEST(Kappa, OriginIsIdentity) {
    const MetricField m = sphere_projection_metric();
    const KappaField k = make_kappa_field(m);
    EXPECT_LT((kappa_matrix(k, {0.0, 0.0}) - Mat2::identity()).max_abs(), 1e-14);
}

TEST(Kappa, SphereOnAxisEigenvalues) {
    // radial eigenvalue sqrt(1 - rhat^2) = 0.8 at rhat 0.6, angular 1
    const MetricField m = sphere_projection_metric();
    const KappaField k = make_kappa_field(m);
    const Mat2 kap = kappa_matrix(k, {0.6, 0.0});
    EXPECT_NEAR(kap.a, 0.8, 1e-12);
    EXPECT_NEAR(kap.d, 1.0, 1e-12);
    EXPECT_NEAR(kap.b, 0.0, 1e-13);
    EXPECT_NEAR(kap.c, 0.0, 1e-13);

    const Mat2 gauge = kap * kap.transpose();
    EXPECT_NEAR(gauge.a, 0.64, 1e-12);
    EXPECT_NEAR(gauge.d, 1.0, 1e-12);
    const Mat2 gi = inverse_metric_at(m, {0.6, 0.0});
    EXPECT_LT((gauge - gi).max_abs(), 1e-12);
}

TEST(Kappa, GaugeIdentityAtSampledPoints) {
    const MetricField m = sphere_projection_metric();
    const KappaField k = make_kappa_field(m);
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double rho = 0.97 * std::sqrt(u(rng));
        const double ang = 2.0 * M_PI * u(rng);
        const ChartPoint q{rho * std::cos(ang), rho * std::sin(ang)};
        const Mat2 kap = kappa_matrix(k, q);
        worst = std::max(
            worst, (kap * kap.transpose() - inverse_metric_at(m, q)).max_abs());
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Kappa, NotTheSymmetricRootOffAxis) {
    const MetricField m = sphere_projection_metric();
    const KappaField k = make_kappa_field(m);
    const ChartPoint q{0.4, 0.3};
    const Mat2 kap = kappa_matrix(k, q);
    const Mat2 root = sym_sqrt(inverse_metric_at(m, q));
    EXPECT_GT((kap - kap.transpose()).max_abs(), 1e-3);
    EXPECT_GT((kap - root).max_abs(), 1e-3);
    // still a valid gauge factor
    EXPECT_LT((kap * kap.transpose() - inverse_metric_at(m, q)).max_abs(), 1e-12);
}

TEST(Kappa, DomainErrorOutsideChart) {
    const MetricField m = sphere_projection_metric();
    const KappaField k = make_kappa_field(m);
    EXPECT_THROW(kappa_matrix(k, {0.9, 0.7}), DomainError);
}

TEST(Kappa, ApplyMatchesMatrix) {
    const MetricField m = hyperbolic_metric(4.0);
    const KappaField k = make_kappa_field(m);
    const ChartPoint q{0.7, -0.4};
    const Vec2 v{0.3, 0.9};
    const Vec2 applied = kappa_apply(k, q, v);
    const Vec2 expect = kappa_matrix(k, q) * v;
    EXPECT_NEAR(applied.x, expect.x, 1e-15);
    EXPECT_NEAR(applied.y, expect.y, 1e-15);
}

TEST(RenormalizedTransport, EuclideanKeepsTheCurve) {
    const MetricField m = euclidean_metric(10.0);
    const RadialProfile p =
        solve_volume_preserving([](double) { return 1.0; }, 6.0, 5.0, 500);
    const auto line = [](double s) { return Vec2{0.2 + s / std::sqrt(2.0),
                                                 0.1 + s / std::sqrt(2.0)}; };
    const GeodesicCurve out =
        renormalized_transport(m, p, kStdFrame, line, 1.0, 50);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec2 expect = line(out.param[i]);
        EXPECT_LT((out.points[i].vec() - expect).norm(), 1e-9);
    }
}

TEST(RenormalizedTransport, SphereCircleAtUnitSpeed) {
    const MetricField m = sphere_projection_metric();
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    const double r = 0.9;
    const double rh = p.r_hat(r); // = r sqrt(1 - r^2/4)
    const double phi0 = 0.25;
    const auto circle = [&](double s) {
        return Vec2{r * std::cos(s / r + phi0), r * std::sin(s / r + phi0)};
    };
    const GeodesicCurve out =
        renormalized_transport(m, p, kStdFrame, circle, 1.2, 400);
    for (std::size_t i = 0; i < out.size(); ++i) {
        // image circle of chart radius r_hat(r), angle advancing as t/r_hat
        EXPECT_NEAR(out.points[i].radius(), rh, 1e-9);
        const double ang = std::atan2(out.points[i].y, out.points[i].x);
        const double expect = phi0 + out.param[i] / rh;
        EXPECT_NEAR(std::remainder(ang - expect, 2.0 * M_PI), 0.0, 1e-7);
        EXPECT_NEAR(g_norm(m, out.points[i], out.tangents[i]), 1.0, 1e-9);
    }
    // independent finite-difference speed along the output samples
    for (std::size_t i = 1; i + 1 < out.size(); ++i) {
        const Vec2 fd = (out.points[i + 1].vec() - out.points[i - 1].vec()) /
                        (out.param[i + 1] - out.param[i - 1]);
        EXPECT_NEAR(g_norm(m, out.points[i], fd), 1.0, 1e-5);
    }
}

TEST(RenormalizedTransport, SphereRadialRayBecomesGeodesic) {
    const MetricField m = sphere_projection_metric();
    const RadialProfile p = solve_volume_preserving(
        sin_over_x, M_PI / 2.0, std::numeric_limits<double>::infinity(), 2000);
    const Vec2 u{std::cos(0.9), std::sin(0.9)};
    const auto ray = [&](double s) { return u * s; };
    const GeodesicCurve out =
        renormalized_transport(m, p, kStdFrame, ray, 1.2, 100);
    // param is the Riemannian length r'(s); points sit on the radial
    // geodesic at chart radius sin(r')
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double rhat = out.points[i].radius();
        const double t = out.param[i];
        EXPECT_NEAR(rhat, std::sin(t), 1e-7);
        const Vec2 dir = out.points[i].vec() / rhat;
        EXPECT_LT((dir - u).norm(), 1e-9);
    }
}

TEST(RadialProfileInvariants, StrictlyIncreasingWithPositiveSlip) {
    for (const auto& g :
         {std::function<double(double)>(sin_over_x),
          std::function<double(double)>(sinh_over_x),
          std::function<double(double)>([](double) { return 1.0; })}) {
        const RadialProfile p = solve_volume_preserving(g, 1.5, 1.2, 700);
        double prev = -1.0;
        for (double r : p.sample_grid()) {
            const double rp = p.r_prime(r);
            EXPECT_GT(rp, prev);
            prev = rp;
            if (r > 0.0) {
                EXPECT_GT(p.slip(r), 0.0);
            }
        }
        EXPECT_EQ(p.r_prime(0.0), 0.0);
        EXPECT_NEAR(p.slip(1e-4), 1.0, 1e-4);
    }
}

TEST(BuildRadialProfile, MatchesDirectVolumeSolve) {
    const MetricField m = sphere_projection_metric();
    const RadialProfile p = build_radial_profile(m, 2000);
    EXPECT_NEAR(p.r_max(), std::sqrt(2.0), 1e-7);
    for (double r : {0.3, 0.8, 1.2}) {
        EXPECT_NEAR(p.r_prime(r), std::acos(1.0 - 0.5 * r * r), 1e-7);
        EXPECT_NEAR(p.r_hat(r), r * std::sqrt(1.0 - 0.25 * r * r), 1e-7);
    }
}

TEST(DirectionalProfile, AgreesWithRadialRouteOnTheSphere) {
    const MetricField m = sphere_projection_metric();
    const NormalFrame fr = make_normal_frame(m, {0.0, 0.0});
    for (const Vec2 dir : {Vec2{1.0, 0.0}, Vec2{0.6, 0.8}}) {
        const RadialProfile p =
            solve_volume_preserving_directional(m, fr, dir, 1.45, 1000, 1.3);
        for (double r : {0.4, 0.9, 1.25}) {
            EXPECT_NEAR(p.r_prime(r), std::acos(1.0 - 0.5 * r * r), 1e-5);
            EXPECT_NEAR(p.slip(r), r / std::sin(std::acos(1.0 - 0.5 * r * r)),
                        1e-5);
        }
    }
}
