#pragma once

#include <array>
#include <cstddef>

namespace riemann2d {

// One classical fourth-order Runge-Kutta step for autonomous-in-form
// systems y' = f(t, y) on a fixed-size state.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& f, double t, const std::array<double, N>& y,
                               double h) {
    std::array<double, N> k1 = f(t, y);
    std::array<double, N> s;

    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k1[i];
    std::array<double, N> k2 = f(t + 0.5 * h, s);

    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + 0.5 * h * k2[i];
    std::array<double, N> k3 = f(t + 0.5 * h, s);

    for (std::size_t i = 0; i < N; ++i) s[i] = y[i] + h * k3[i];
    std::array<double, N> k4 = f(t + h, s);

    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    return out;
}

template <typename F>
double rk4_step(F&& f, double t, double y, double h) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
}

} // namespace riemann2d
