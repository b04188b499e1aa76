#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tauberian {

// ---------------------------------------------------------------------------
// Error taxonomy shared by all modules.
// ---------------------------------------------------------------------------

/// A parameter is outside the mathematical domain of an operation.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The input covers too little of the time axis (or sequence) for the request.
struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A requested splice time does not lie on the sampling grid.
struct alignment_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Endpoint states of two trajectories do not match at the splice point.
struct concatenation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller-side precondition (e.g. near-optimality of a play) is violated.
struct contract_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A simulated path left the admissible state space.
struct feasibility_error : std::runtime_error {
    feasibility_error(const std::string& msg, double t)
        : std::runtime_error(msg), first_violation_time(t) {}
    double first_violation_time;
};

/// A state-space expansion exceeded its configured node budget.
struct capacity_error : std::runtime_error {
    capacity_error(const std::string& msg, std::size_t frontier)
        : std::runtime_error(msg), frontier_size(frontier) {}
    std::size_t frontier_size;
};

// ---------------------------------------------------------------------------
// Formatting and small numeric helpers.
// ---------------------------------------------------------------------------

/// Shortest decimal string that round-trips the given double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

/// Composite trapezoid of uniformly sampled values over [0, t].
/// The last partial cell, if any, uses linear interpolation between samples.
inline double trapezoid_integral(std::span<const double> v, double h, double t) {
    if (v.size() < 2) throw insufficient_data_error("trapezoid: need at least two samples");
    const double horizon = h * static_cast<double>(v.size() - 1);
    if (t > horizon * (1.0 + 1e-12) + 1e-15)
        throw insufficient_data_error("trapezoid: t exceeds sampled horizon");
    if (t <= 0.0) throw domain_error("trapezoid: t must be positive");

    auto m = static_cast<std::size_t>(std::floor(t / h + 1e-9));
    if (m > v.size() - 1) m = v.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 1; k < m; ++k) sum += v[k];
    double integral = h * (0.5 * v[0] + sum + (m >= 1 ? 0.5 * v[m] : -0.5 * v[0]));
    if (m == 0) integral = 0.0;

    const double frac = t - static_cast<double>(m) * h;
    if (frac > 1e-12 * h && m + 1 <= v.size() - 1) {
        const double vt = v[m] + (v[m + 1] - v[m]) * (frac / h);
        integral += frac * 0.5 * (v[m] + vt);
    }
    return integral;
}

/// Prefix trapezoid sums: out[k] = integral of the samples over [0, k*h].
inline std::vector<double> trapezoid_prefix(std::span<const double> v, double h) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t k = 1; k < v.size(); ++k)
        out[k] = out[k - 1] + 0.5 * h * (v[k - 1] + v[k]);
    return out;
}

inline bool nearly_integer(double x, double tol = 1e-6) {
    return std::abs(x - std::round(x)) <= tol;
}

}  // namespace detail

}  // namespace tauberian
