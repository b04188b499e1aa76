#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/report.hpp"

namespace tauberian::means {

// ---------------------------------------------------------------------------
// Bounded payoff streams, discrete and continuous time.
// ---------------------------------------------------------------------------

/// A bounded real sequence a_1, a_2, ...  Values come from an explicit prefix,
/// a generating rule, or both (prefix first, rule for the tail).
class BoundedSequence {
  public:
    using Rule = std::function<double(std::size_t)>;  // 1-based index

    static BoundedSequence from_values(std::vector<double> values, double lo, double hi) {
        return BoundedSequence(std::move(values), nullptr, lo, hi);
    }

    static BoundedSequence from_rule(Rule rule, double lo, double hi) {
        return BoundedSequence({}, std::move(rule), lo, hi);
    }

    static BoundedSequence periodic(std::vector<double> pattern, double lo, double hi) {
        if (pattern.empty()) throw domain_error("periodic: empty pattern");
        auto rule = [pattern](std::size_t i) {
            return pattern[(i - 1) % pattern.size()];
        };
        return BoundedSequence({}, std::move(rule), lo, hi);
    }

    static BoundedSequence constant(double c) {
        return from_rule([c](std::size_t) { return c; }, c, c);
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    bool can_produce(std::size_t n) const {
        return rule_ != nullptr || n <= values_.size();
    }

    /// a_i for 1-based i.  Throws if the sequence cannot produce index i or if
    /// a produced value escapes the declared bounds.
    double value(std::size_t i) const {
        if (i == 0) throw domain_error("BoundedSequence: indices are 1-based");
        double v;
        if (i <= values_.size()) {
            v = values_[i - 1];
        } else if (rule_) {
            v = rule_(i);
        } else {
            throw insufficient_data_error("BoundedSequence: index beyond stored prefix");
        }
        if (v < lo_ - 1e-12 || v > hi_ + 1e-12)
            throw domain_error("BoundedSequence: produced value escapes [lo, hi]");
        return v;
    }

  private:
    BoundedSequence(std::vector<double> values, Rule rule, double lo, double hi)
        : values_(std::move(values)), rule_(std::move(rule)), lo_(lo), hi_(hi) {
        if (!(lo <= hi)) throw domain_error("BoundedSequence: lo > hi");
    }

    std::vector<double> values_;
    Rule rule_;
    double lo_, hi_;
};

/// A bounded function of continuous time sampled on a uniform grid s_k = k*h,
/// optionally backed by a rule so the horizon can be extended on demand.
class SampledFunction {
  public:
    using Rule = std::function<double(double)>;

    static SampledFunction from_samples(std::vector<double> samples, double h,
                                        double lo, double hi) {
        return SampledFunction(std::move(samples), nullptr, h, lo, hi);
    }

    static SampledFunction from_function(Rule g, double h, double horizon,
                                         double lo, double hi) {
        if (horizon <= 0.0) throw domain_error("SampledFunction: horizon must be positive");
        SampledFunction f({}, std::move(g), h, lo, hi);
        f.extend_to(horizon);
        return f;
    }

    double step() const { return h_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double horizon() const { return h_ * static_cast<double>(samples_.size() - 1); }
    bool extendable() const { return rule_ != nullptr; }
    const std::vector<double>& samples() const { return samples_; }

    /// Append samples until the stored horizon reaches at least `target`.
    void extend_to(double target) {
        auto need = static_cast<std::size_t>(std::ceil(target / h_ - 1e-9));
        if (need + 1 <= samples_.size()) return;
        if (!rule_)
            throw insufficient_data_error("SampledFunction: horizon too short and no rule");
        samples_.reserve(need + 1);
        while (samples_.size() <= need) {
            double s = h_ * static_cast<double>(samples_.size());
            double v = rule_(s);
            if (v < lo_ - 1e-12 || v > hi_ + 1e-12)
                throw domain_error("SampledFunction: rule value escapes [lo, hi]");
            samples_.push_back(v);
        }
    }

  private:
    SampledFunction(std::vector<double> samples, Rule rule, double h, double lo, double hi)
        : samples_(std::move(samples)), rule_(std::move(rule)), h_(h), lo_(lo), hi_(hi) {
        if (h <= 0.0) throw domain_error("SampledFunction: step must be positive");
        if (!(lo <= hi)) throw domain_error("SampledFunction: lo > hi");
        for (double v : samples_)
            if (v < lo - 1e-12 || v > hi + 1e-12)
                throw domain_error("SampledFunction: sample escapes [lo, hi]");
        if (samples_.empty()) {
            if (!rule_) throw domain_error("SampledFunction: no samples and no rule");
            samples_.push_back(rule_(0.0));
        }
    }

    std::vector<double> samples_;
    Rule rule_;
    double h_;
    double lo_, hi_;
};

// ---------------------------------------------------------------------------
// The four averaging operators.
// ---------------------------------------------------------------------------

/// (a_1 + ... + a_n) / n.
inline double cesaro_mean(const BoundedSequence& a, std::size_t n) {
    if (n == 0) throw domain_error("cesaro_mean: n must be >= 1");
    if (!a.can_produce(n))
        throw insufficient_data_error("cesaro_mean: sequence shorter than n");
    double sum = 0.0;
    for (std::size_t i = 1; i <= n; ++i) sum += a.value(i);
    return sum / static_cast<double>(n);
}

/// lambda * sum_{i>=1} (1-lambda)^{i-1} a_i, truncated once the remaining
/// geometric mass times the value span drops below tail_tol.  The discarded
/// tail is replaced by its midpoint estimate, so the result is within
/// tail_tol of the exact series.
inline double abel_mean(const BoundedSequence& a, double lambda, double tail_tol = 1e-12) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw domain_error("abel_mean: lambda must lie in (0, 1]");
    if (!(tail_tol > 0.0)) throw domain_error("abel_mean: tail_tol must be positive");
    if (lambda == 1.0) return a.value(1);

    const double span = a.hi() - a.lo();
    // Smallest I with (1-lambda)^I * (span + 1) <= tail_tol; the +1 absorbs
    // the midpoint correction's own error margin.
    const double q = 1.0 - lambda;
    double raw = std::log(tail_tol / (span + 1.0)) / std::log(q);
    std::size_t trunc = raw <= 1.0 ? 1 : static_cast<std::size_t>(std::ceil(raw));
    if (!a.can_produce(trunc))
        throw insufficient_data_error("abel_mean: sequence too short for requested tail_tol");

    double weight = lambda;  // lambda * (1-lambda)^{i-1}
    double sum = 0.0;
    for (std::size_t i = 1; i <= trunc; ++i) {
        sum += weight * a.value(i);
        weight *= q;
    }
    // Remaining mass is (1-lambda)^trunc; credit it at the midpoint of the range.
    sum += std::pow(q, static_cast<double>(trunc)) * 0.5 * (a.lo() + a.hi());
    return sum;
}

/// (1/t) * integral_0^t g(s) ds by composite trapezoid on the sample grid.
inline double time_average(const SampledFunction& g, double t) {
    if (!(t > 0.0)) throw domain_error("time_average: t must be positive");
    SampledFunction f = g;
    if (f.horizon() < t * (1.0 - 1e-12)) {
        if (!f.extendable())
            throw insufficient_data_error("time_average: t exceeds sampled horizon");
        f.extend_to(t);
    }
    return detail::trapezoid_integral(f.samples(), f.step(), t) / t;
}

/// lambda * integral_0^inf e^{-lambda s} g(s) ds, truncated at a horizon S
/// with e^{-lambda S} * sup|g| <= tail_tol and midpoint tail compensation.
inline double discounted_average(const SampledFunction& g, double lambda,
                                 double tail_tol = 1e-9) {
    if (!(lambda > 0.0)) throw domain_error("discounted_average: lambda must be positive");
    if (!(tail_tol > 0.0)) throw domain_error("discounted_average: tail_tol must be positive");

    const double bound = std::max(std::abs(g.lo()), std::abs(g.hi()));
    double needed = 0.0;
    if (bound > tail_tol) needed = std::log(bound / tail_tol) / lambda;

    SampledFunction f = g;
    if (f.horizon() < needed) {
        if (!f.extendable())
            throw insufficient_data_error(
                "discounted_average: horizon too short for requested tail_tol");
        f.extend_to(needed);
    }

    const auto& v = f.samples();
    const double h = f.step();
    std::vector<double> integrand(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        double s = h * static_cast<double>(k);
        integrand[k] = lambda * std::exp(-lambda * s) * v[k];
    }
    const double horizon = f.horizon();
    double value = detail::trapezoid_integral(integrand, h, horizon);
    // Tail mass e^{-lambda*horizon}, credited at the midpoint of [lo, hi].
    value += std::exp(-lambda * horizon) * 0.5 * (f.lo() + f.hi());
    return value;
}

// ---------------------------------------------------------------------------
// Hardy-Littlewood style comparison table.
// ---------------------------------------------------------------------------

/// Tabulates Cesaro means over n_grid and Abel means over lambda_grid, checks
/// each against [lo, hi], and estimates liminf/limsup from a sliding window
/// over the last half of the n grid.
inline ValueReport hardy_littlewood_report(const BoundedSequence& a,
                                           const std::vector<std::size_t>& n_grid,
                                           const std::vector<double>& lambda_grid,
                                           double tail_tol = 1e-9) {
    if (n_grid.empty() || lambda_grid.empty())
        throw domain_error("hardy_littlewood_report: empty grid");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()))
        throw domain_error("hardy_littlewood_report: n_grid must be ascending");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] < lambda_grid[i - 1]))
            throw domain_error("hardy_littlewood_report: lambda_grid must be descending");

    ValueReport rep("hardy_littlewood", {"param", "value"});
    rep.add_meta("lo", a.lo());
    rep.add_meta("hi", a.hi());

    std::vector<double> vn(n_grid.size());
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        vn[i] = cesaro_mean(a, n_grid[i]);
        bool ok = vn[i] >= a.lo() - 1e-12 && vn[i] <= a.hi() + 1e-12;
        rep.add_row("V_n", {static_cast<double>(n_grid[i]), vn[i]}, ok);
    }
    for (double lam : lambda_grid) {
        double v = abel_mean(a, lam, tail_tol);
        bool ok = v >= a.lo() - tail_tol && v <= a.hi() + tail_tol;
        rep.add_row("V_lambda", {lam, v}, ok);
    }

    // liminf / limsup proxies: extremes of V_n over the last half of the grid.
    std::size_t start = n_grid.size() / 2;
    double lim_lo = std::numeric_limits<double>::infinity();
    double lim_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = start; i < n_grid.size(); ++i) {
        lim_lo = std::min(lim_lo, vn[i]);
        lim_hi = std::max(lim_hi, vn[i]);
    }
    rep.add_row("window_liminf", {static_cast<double>(n_grid[start]), lim_lo});
    rep.add_row("window_limsup", {static_cast<double>(n_grid[start]), lim_hi});
    return rep;
}

}  // namespace tauberian::means
