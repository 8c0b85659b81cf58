#pragma once

#include <array>
#include <cmath>

#include "riemann2d/errors.hpp"

namespace riemann2d {

// Plain 2-tuple with value semantics. Used both for chart displacements
// and tangent components; the tensorial meaning lives in the callers.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    double norm() const { return std::hypot(x, y); }
    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // counterclockwise quarter turn
    constexpr Vec2 perp() const { return {-y, x}; }
};

constexpr inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Row-major 2x2 matrix, closed-form inverse and symmetric eigensolver.
struct Mat2 {
    double a = 0.0, b = 0.0; // [ a b ]
    double c = 0.0, d = 0.0; // [ c d ]

    constexpr Mat2() = default;
    constexpr Mat2(double aa, double bb, double cc, double dd)
        : a(aa), b(bb), c(cc), d(dd) {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 from_columns(Vec2 c0, Vec2 c1) {
        return {c0.x, c1.x, c0.y, c1.y};
    }
    // s * v v^T
    static constexpr Mat2 outer(Vec2 v, double s = 1.0) {
        return {s * v.x * v.x, s * v.x * v.y, s * v.y * v.x, s * v.y * v.y};
    }

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }

    constexpr Mat2 operator+(const Mat2& o) const {
        return {a + o.a, b + o.b, c + o.c, d + o.d};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {a - o.a, b - o.b, c - o.c, d - o.d};
    }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Vec2 operator*(Vec2 v) const {
        return {a * v.x + b * v.y, c * v.x + d * v.y};
    }

    Mat2 inverse() const {
        const double dt = det();
        if (!(std::abs(dt) > 0.0))
            throw SingularMetricError("2x2 inverse: determinant is zero");
        const double s = 1.0 / dt;
        return {d * s, -b * s, -c * s, a * s};
    }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }
};

// Eigenvalues of a symmetric 2x2, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    const double mean = 0.5 * (m.a + m.d);
    const double off = 0.5 * (m.b + m.c);
    const double disc = std::hypot(0.5 * (m.a - m.d), off);
    return {mean - disc, mean + disc};
}

// Symmetric positive definite square root via eigendecomposition.
inline Mat2 sym_sqrt(const Mat2& m) {
    const double off = 0.5 * (m.b + m.c);
    if (std::abs(off) < 1e-300 && std::abs(m.a - m.d) < 1e-300) {
        const double s = std::sqrt(m.a);
        return {s, 0.0, 0.0, s};
    }
    auto ev = sym_eigenvalues(m);
    if (ev[0] <= 0.0)
        throw SingularMetricError("sym_sqrt: matrix not positive definite");
    // eigenvector for ev[1]
    Vec2 u = (std::abs(off) > std::abs(m.a - ev[1]))
                 ? Vec2{off, ev[1] - m.a}
                 : Vec2{ev[1] - m.d, off};
    const double n = u.norm();
    if (n == 0.0) u = {1.0, 0.0};
    else u = u / n;
    const Vec2 v = u.perp();
    const double s0 = std::sqrt(ev[0]);
    const double s1 = std::sqrt(ev[1]);
    return Mat2::outer(u, s1) + Mat2::outer(v, s0);
}

// sin(x)/x and sinh(x)/x with series fallback near zero.
inline double sin_over_x(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

inline double sinh_over_x(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

} // namespace riemann2d
