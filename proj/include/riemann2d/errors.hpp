#pragma once

#include <stdexcept>
#include <string>

namespace riemann2d {

// Error taxonomy shared by the chart, geodesic and distortion layers.
// Everything derives from Error so callers can catch the whole family.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Point outside a metric's declared chart domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Metric matrix with non-positive determinant where an inverse was needed.
class SingularMetricError : public Error {
public:
    explicit SingularMetricError(const std::string& msg) : Error(msg) {}
};

// A curve left the chart during integration; carries the last parameter
// value that was still inside.
class DomainEscapeError : public Error {
public:
    DomainEscapeError(const std::string& msg, double last_valid_param)
        : Error(msg), last_valid_t(last_valid_param) {}
    double last_valid_t;
};

// Bad step count or step size for a fixed-step integrator.
class StepError : public Error {
public:
    explicit StepError(const std::string& msg) : Error(msg) {}
};

// Iterative inversion failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Query outside the tabulated range of a profile.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

// A radial ODE ran into a metric singularity (blow-up or vanishing
// volume element).
class SingularityError : public Error {
public:
    SingularityError(const std::string& msg, double boundary)
        : Error(msg), boundary_value(boundary) {}
    double boundary_value;
};

// Mollifier support sticking out of the chart.
class SupportEscapeError : public Error {
public:
    explicit SupportEscapeError(const std::string& msg) : Error(msg) {}
};

// Malformed manifold spec file or CLI configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace riemann2d
