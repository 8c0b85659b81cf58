#pragma once

#include <cmath>
#include <cstddef>

#include "riemann2d/errors.hpp"

namespace riemann2d {

// Composite Simpson rule with n panels (n is rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n < 2) throw StepError("simpson: need at least 2 panels");
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; i += 2) odd += f(a + h * i);
    for (int i = 2; i < n; i += 2) even += f(a + h * i);
    return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

// Trapezoid rule over one full period; spectrally accurate for smooth
// periodic integrands.
template <typename F>
double periodic_trapezoid(F&& f, double period, int n) {
    if (n < 1) throw StepError("periodic_trapezoid: need at least 1 node");
    const double h = period / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(h * i);
    return s * h;
}

} // namespace riemann2d
