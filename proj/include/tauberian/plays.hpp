#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tauberian/common.hpp"

namespace tauberian::plays {

/// A sampled play: states x(k*h) in R^d and running costs g(x(k*h)) in [0,1].
/// d may be zero for pure cost paths.
class Trajectory {
  public:
    Trajectory(std::size_t state_dim, double step) : dim_(state_dim), h_(step) {
        if (!(step > 0.0)) throw domain_error("Trajectory: step must be positive");
    }

    static Trajectory from_costs(std::vector<double> costs, double step) {
        Trajectory x(0, step);
        x.costs_.reserve(costs.size());
        for (double c : costs) x.append({}, c);
        return x;
    }

    void reserve(std::size_t n) {
        states_.reserve(n * dim_);
        costs_.reserve(n);
    }

    void append(std::span<const double> state, double cost) {
        if (state.size() != dim_) throw domain_error("Trajectory: state dimension mismatch");
        if (cost < -1e-12 || cost > 1.0 + 1e-12)
            throw domain_error("Trajectory: cost outside [0, 1]");
        states_.insert(states_.end(), state.begin(), state.end());
        costs_.push_back(std::min(1.0, std::max(0.0, cost)));
    }

    std::size_t size() const { return costs_.size(); }
    std::size_t state_dim() const { return dim_; }
    double step() const { return h_; }
    double horizon() const {
        return costs_.empty() ? 0.0 : h_ * static_cast<double>(costs_.size() - 1);
    }

    std::span<const double> state(std::size_t k) const {
        return {states_.data() + k * dim_, dim_};
    }
    double cost(std::size_t k) const { return costs_[k]; }
    const std::vector<double>& costs() const { return costs_; }

    void write_csv(std::ostream& os) const {
        os << "s";
        for (std::size_t d = 0; d < dim_; ++d) os << ",state" << d;
        os << ",cost\n";
        for (std::size_t k = 0; k < size(); ++k) {
            os << format_double(h_ * static_cast<double>(k));
            auto x = state(k);
            for (double xi : x) os << "," << format_double(xi);
            os << "," << format_double(costs_[k]) << "\n";
        }
    }

    void write_csv_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("Trajectory: cannot open " + path);
        write_csv(os);
    }

  private:
    std::size_t dim_;
    double h_;
    std::vector<double> states_;  // row-major, dim_ entries per sample
    std::vector<double> costs_;
};

/// Splice Y onto X at time s: the result follows X on [0, s] and Y shifted by
/// s afterwards.  s must sit on the common grid and the endpoint states must
/// agree within state_tol.
inline Trajectory concatenate(const Trajectory& x, double s, const Trajectory& y,
                              double state_tol = 1e-9) {
    if (x.state_dim() != y.state_dim())
        throw domain_error("concatenate: state dimensions differ");
    if (std::abs(x.step() - y.step()) > 1e-12 * x.step())
        throw alignment_error("concatenate: sampling steps differ");
    if (s < 0.0) throw domain_error("concatenate: splice time must be nonnegative");

    const double h = x.step();
    const double ratio = s / h;
    if (!detail::nearly_integer(ratio))
        throw alignment_error("concatenate: splice time off the sampling grid");
    const auto k = static_cast<std::size_t>(std::llround(ratio));
    if (k >= x.size())
        throw insufficient_data_error("concatenate: first trajectory shorter than s");
    if (y.size() == 0) throw insufficient_data_error("concatenate: empty second trajectory");

    double dist2 = 0.0;
    auto xe = x.state(k);
    auto ys = y.state(0);
    for (std::size_t d = 0; d < x.state_dim(); ++d) {
        double diff = xe[d] - ys[d];
        dist2 += diff * diff;
    }
    if (std::sqrt(dist2) > state_tol)
        throw concatenation_error("concatenate: endpoint states do not match");

    Trajectory out(x.state_dim(), h);
    out.reserve(k + y.size());
    for (std::size_t i = 0; i <= k; ++i) out.append(x.state(i), x.cost(i));
    for (std::size_t i = 1; i < y.size(); ++i) out.append(y.state(i), y.cost(i));
    return out;
}

/// gamma_t(X) = (1/t) integral_0^t g ds on the sample grid.
inline double gamma_t(const Trajectory& x, double t) {
    if (!(t > 0.0)) throw domain_error("gamma_t: t must be positive");
    if (t > x.horizon() * (1.0 + 1e-12))
        throw insufficient_data_error("gamma_t: t exceeds trajectory horizon");
    return detail::trapezoid_integral(x.costs(), x.step(), t) / t;
}

/// gamma_lambda(X) = lambda integral_0^inf e^{-lambda s} g ds.  The trajectory
/// must reach far enough that the discarded tail mass e^{-lambda H} is below
/// tail_tol; the tail is credited at cost 1/2.
inline double gamma_lambda(const Trajectory& x, double lambda, double tail_tol = 1e-6) {
    if (!(lambda > 0.0)) throw domain_error("gamma_lambda: lambda must be positive");
    const double horizon = x.horizon();
    if (std::exp(-lambda * horizon) > tail_tol)
        throw insufficient_data_error("gamma_lambda: horizon too short for tail_tol");
    const auto& g = x.costs();
    const double h = x.step();
    std::vector<double> integrand(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        integrand[k] = lambda * std::exp(-lambda * h * static_cast<double>(k)) * g[k];
    return detail::trapezoid_integral(integrand, h, horizon) +
           0.5 * std::exp(-lambda * horizon);
}

/// The map s -> gamma_s(X) on the trajectory's own grid.  The value at s = 0
/// is the right limit, i.e. the initial cost.
struct PayoffCurve {
    std::vector<double> grid;
    std::vector<double> values;
};

inline PayoffCurve payoff_curve(const Trajectory& x) {
    if (x.size() < 2) throw insufficient_data_error("payoff_curve: need two samples");
    auto prefix = detail::trapezoid_prefix(x.costs(), x.step());
    PayoffCurve c;
    c.grid.resize(x.size());
    c.values.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        double s = x.step() * static_cast<double>(k);
        c.grid[k] = s;
        c.values[k] = k == 0 ? x.cost(0) : prefix[k] / s;
    }
    return c;
}

/// Last time L in (0, t] with gamma_L(X) > v_ref + eps, or 0 when no such
/// time exists; the play is then (v_ref, eps)-good on (L, t].  Precondition:
/// gamma_t(X) <= v_ref + eps/2, i.e. the play is near optimal at horizon t.
inline double good_window_time(const Trajectory& x, double t, double eps, double v_ref) {
    if (!(eps > 0.0)) throw domain_error("good_window_time: eps must be positive");
    const double gt = gamma_t(x, t);
    if (gt > v_ref + 0.5 * eps + 1e-12)
        throw contract_error("good_window_time: play is not eps/2-optimal at t");

    const double h = x.step();
    auto kmax = static_cast<std::size_t>(std::floor(t / h + 1e-9));
    if (kmax > x.size() - 1) kmax = x.size() - 1;
    auto prefix = detail::trapezoid_prefix(x.costs(), h);
    const double threshold = v_ref + eps;

    std::size_t last = 0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        double s = h * static_cast<double>(k);
        if (prefix[k] / s > threshold) last = k;
    }
    if (last == 0) return 0.0;
    double left = h * static_cast<double>(last);
    // One interpolation step sharpens the exceedance boundary inside the cell.
    if (last + 1 < prefix.size()) {
        double mid_s = left + 0.5 * h;
        double mid_g = 0.5 * (prefix[last] + prefix[last + 1]);
        if (mid_g / mid_s > threshold) return std::min(mid_s, t);
    }
    return std::min(left, t);
}

}  // namespace tauberian::plays
