#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/plays.hpp"
#include "tauberian/report.hpp"

namespace tauberian::control {

using State = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Piecewise-constant control schedules.
// ---------------------------------------------------------------------------

/// A piecewise-constant control: value values[i] on [times[i], times[i+1]),
/// with the last piece extending to +infinity.  times[0] must be 0.
class ControlSchedule {
  public:
    static ControlSchedule constant(double u) { return from_pieces({0.0}, {u}); }

    static ControlSchedule from_pieces(std::vector<double> times, std::vector<double> values) {
        if (times.empty() || times.size() != values.size())
            throw domain_error("ControlSchedule: times/values size mismatch");
        if (times.front() != 0.0)
            throw domain_error("ControlSchedule: first piece must start at 0");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw domain_error("ControlSchedule: breakpoints must increase strictly");
        ControlSchedule s;
        s.times_ = std::move(times);
        s.values_ = std::move(values);
        return s;
    }

    /// u_first on [0, tau), u_second afterwards.
    static ControlSchedule one_switch(double tau, double u_first, double u_second) {
        if (!(tau > 0.0)) throw domain_error("one_switch: tau must be positive");
        return from_pieces({0.0, tau}, {u_first, u_second});
    }

    double at(double s) const {
        // Right-continuous lookup; s before 0 clamps to the first piece.
        std::size_t i = times_.size();
        while (i > 1 && times_[i - 1] > s) --i;
        return values_[i - 1];
    }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t piece_count() const { return times_.size(); }

    /// Merge adjacent pieces with equal control values.
    ControlSchedule canonical() const {
        std::vector<double> t{times_[0]}, v{values_[0]};
        for (std::size_t i = 1; i < times_.size(); ++i) {
            if (values_[i] != v.back()) {
                t.push_back(times_[i]);
                v.push_back(values_[i]);
            }
        }
        return from_pieces(std::move(t), std::move(v));
    }

    /// Deterministic ordering used for tie-breaking among equal-value optima.
    friend bool operator<(const ControlSchedule& a, const ControlSchedule& b) {
        if (a.values_ != b.values_) return a.values_ < b.values_;
        return a.times_ < b.times_;
    }
    friend bool operator==(const ControlSchedule& a, const ControlSchedule& b) {
        return a.values_ == b.values_ && a.times_ == b.times_;
    }

  private:
    ControlSchedule() = default;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// First time the running cost switches off / back on along a play whose cost
/// is 1 outside a single state-space band: cost(s) = 1 for s < enter, 0 on
/// [enter, exit], 1 for s > exit.  Either time may be +inf.
struct BandCrossing {
    double enter;
    double exit;
};

// ---------------------------------------------------------------------------
// Problem description.
// ---------------------------------------------------------------------------

struct ControlProblem {
    std::string name;
    std::size_t state_dim = 0;
    double u_lo = 0.0;
    double u_hi = 1.0;
    std::vector<double> control_grid;
    std::function<void(std::span<const double>, double, std::span<double>)> dynamics;
    std::function<double(std::span<const double>)> cost;
    std::function<bool(std::span<const double>)> invariant;  // optional

    // Optional exact hooks for instances with closed-form structure.
    std::function<void(std::span<const double>, double, double, std::span<double>)> exact_step;
    std::function<BandCrossing(std::span<const double>, const ControlSchedule&)> crossings;
};

// ---------------------------------------------------------------------------
// Integration.  Control switches happen exactly at schedule breakpoints; the
// integrator restarts there, so RK4 never straddles a discontinuity in u.
// ---------------------------------------------------------------------------

namespace detail_sim {

struct Rk4Scratch {
    std::array<std::vector<double>, 4> k;
    std::vector<double> tmp;
    void resize(std::size_t d) {
        for (auto& v : k) v.resize(d);
        tmp.resize(d);
    }
};

inline void rk4_step(const ControlProblem& p, std::vector<double>& x, double u, double dt,
                     Rk4Scratch& s) {
    const std::size_t d = x.size();
    p.dynamics(x, u, s.k[0]);
    for (std::size_t i = 0; i < d; ++i) s.tmp[i] = x[i] + 0.5 * dt * s.k[0][i];
    p.dynamics(s.tmp, u, s.k[1]);
    for (std::size_t i = 0; i < d; ++i) s.tmp[i] = x[i] + 0.5 * dt * s.k[1][i];
    p.dynamics(s.tmp, u, s.k[2]);
    for (std::size_t i = 0; i < d; ++i) s.tmp[i] = x[i] + dt * s.k[2][i];
    p.dynamics(s.tmp, u, s.k[3]);
    for (std::size_t i = 0; i < d; ++i)
        x[i] += dt / 6.0 * (s.k[0][i] + 2.0 * s.k[1][i] + 2.0 * s.k[2][i] + s.k[3][i]);
}

inline void advance(const ControlProblem& p, std::vector<double>& x, double u, double dt,
                    Rk4Scratch& s) {
    if (dt <= 0.0) return;
    if (p.exact_step) {
        p.exact_step(x, u, dt, s.tmp);
        std::copy(s.tmp.begin(), s.tmp.end(), x.begin());
    } else {
        rk4_step(p, x, u, dt, s);
    }
}

/// March the state across node grid k*h, k = 0..N, splitting each cell at the
/// schedule's breakpoints.  Calls node(k, state) at every grid point.
template <class NodeFn>
void walk(const ControlProblem& p, const State& x0, const ControlSchedule& sched,
          double horizon, double h, NodeFn&& node) {
    if (!(horizon > 0.0)) throw domain_error("simulate: horizon must be positive");
    if (!(h > 0.0)) throw domain_error("simulate: step must be positive");
    if (x0.size() != p.state_dim) throw domain_error("simulate: state dimension mismatch");
    for (double u : sched.values())
        if (u < p.u_lo - 1e-12 || u > p.u_hi + 1e-12)
            throw domain_error("simulate: schedule value outside the control range");

    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
    const auto& bp = sched.times();
    Rk4Scratch scratch;
    scratch.resize(p.state_dim);
    std::vector<double> x = x0;

    auto check = [&](double t) {
        if (p.invariant && !p.invariant(x))
            throw feasibility_error("simulate: state left the admissible set", t);
    };
    check(0.0);
    node(std::size_t{0}, x);

    std::size_t piece = 0;  // index of the piece containing the current time
    for (std::size_t k = 0; k < n_steps; ++k) {
        double t_a = h * static_cast<double>(k);
        const double t_b = h * static_cast<double>(k + 1);
        while (piece + 1 < bp.size() && bp[piece + 1] <= t_a + 1e-15) ++piece;
        // Hop breakpoint to breakpoint inside the cell.
        while (piece + 1 < bp.size() && bp[piece + 1] < t_b - 1e-15) {
            advance(p, x, sched.values()[piece], bp[piece + 1] - t_a, scratch);
            t_a = bp[piece + 1];
            ++piece;
            check(t_a);
        }
        advance(p, x, sched.values()[piece], t_b - t_a, scratch);
        check(t_b);
        node(k + 1, x);
    }
}

}  // namespace detail_sim

/// Integrate the controlled system and sample states and costs on the h-grid.
inline plays::Trajectory simulate(const ControlProblem& p, const State& x0,
                                  const ControlSchedule& sched, double horizon, double h) {
    plays::Trajectory out(p.state_dim, h);
    out.reserve(static_cast<std::size_t>(horizon / h) + 2);
    detail_sim::walk(p, x0, sched, horizon, h,
                     [&](std::size_t, const std::vector<double>& x) {
                         out.append(x, p.cost(x));
                     });
    return out;
}

// ---------------------------------------------------------------------------
// Payoff of a single schedule.  Instances carrying closed-form crossing times
// are evaluated exactly; otherwise the payoff comes from a quadrature walk.
// ---------------------------------------------------------------------------

inline double crossing_gamma_t(const BandCrossing& c, double t) {
    double cost_time = std::min(t, c.enter) + std::max(0.0, t - c.exit);
    return cost_time / t;
}

inline double crossing_gamma_lambda(const BandCrossing& c, double lambda) {
    double head = std::isinf(c.enter) ? 0.0 : std::exp(-lambda * c.enter);
    double tail = std::isinf(c.exit) ? 0.0 : std::exp(-lambda * c.exit);
    return 1.0 - head + tail;
}

struct SearchConfig {
    int pieces = 8;              // equal-length pieces in the base family
    int keep = 6;                // candidates carried into refinement
    int rounds = 2;              // coordinate-descent sweeps per candidate
    int scan_points = 40;        // uniform candidates per breakpoint window
    int golden_iters = 48;       // golden-section iterations per breakpoint
    std::size_t max_patterns = 20000;
    double h = 1e-2;             // quadrature step when no closed form exists
    double tail_tol = 1e-6;      // discounted-horizon truncation
};

inline double schedule_gamma_t(const ControlProblem& p, const State& x0,
                               const ControlSchedule& s, double t, const SearchConfig& cfg) {
    if (!(t > 0.0)) throw domain_error("schedule_gamma_t: t must be positive");
    if (p.crossings) return crossing_gamma_t(p.crossings(x0, s), t);
    const auto n = static_cast<std::size_t>(std::ceil(t / cfg.h - 1e-9));
    const double h = t / static_cast<double>(n);  // land exactly on t
    double integral = 0.0;
    double prev = 0.0;
    detail_sim::walk(p, x0, s, t, h, [&](std::size_t k, const std::vector<double>& x) {
        double c = p.cost(x);
        if (k > 0) integral += 0.5 * h * (prev + c);
        prev = c;
    });
    return integral / t;
}

inline double schedule_gamma_lambda(const ControlProblem& p, const State& x0,
                                    const ControlSchedule& s, double lambda,
                                    const SearchConfig& cfg) {
    if (!(lambda > 0.0)) throw domain_error("schedule_gamma_lambda: lambda must be positive");
    if (p.crossings) return crossing_gamma_lambda(p.crossings(x0, s), lambda);
    const double span = std::log(1.0 / cfg.tail_tol) / lambda;
    const auto n = static_cast<std::size_t>(std::ceil(span / cfg.h - 1e-9));
    const double h = span / static_cast<double>(n);
    double integral = 0.0;
    double prev = 0.0;
    detail_sim::walk(p, x0, s, span, h, [&](std::size_t k, const std::vector<double>& x) {
        double c = lambda * std::exp(-lambda * h * static_cast<double>(k)) * p.cost(x);
        if (k > 0) integral += 0.5 * h * (prev + c);
        prev = c;
    });
    return integral + 0.5 * std::exp(-lambda * span);
}

// ---------------------------------------------------------------------------
// Value estimation by search over the piecewise-constant family.  Estimates
// are upper bounds on the true infimum: the family is a strict subset of the
// measurable controls.
// ---------------------------------------------------------------------------

struct Estimate {
    double value;
    ControlSchedule witness;
    bool budget_exhausted = false;
};

namespace detail_search {

template <class F>
inline std::pair<double, double> golden_min(F&& f, double a, double b, int iters) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < iters && b - a > 1e-15; ++it) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

using Objective = std::function<double(const ControlSchedule&)>;

/// Coordinate descent on the interior breakpoints of a fixed value pattern:
/// per breakpoint, a uniform scan plus log-spaced ladders from both window
/// edges (optimal switch times can sit many decades below the horizon),
/// then golden-section polish around the best scan point.
inline std::pair<double, ControlSchedule> refine_breakpoints(
    const Objective& f, ControlSchedule s, double best, double span, const SearchConfig& cfg) {
    const double margin = std::max(1e-12 * span, 1e-15);
    for (int round = 0; round < cfg.rounds; ++round) {
        for (std::size_t i = 1; i < s.piece_count(); ++i) {
            std::vector<double> times = s.times();
            const double lo = times[i - 1];
            const double hi = i + 1 < times.size() ? times[i + 1] : span;
            if (hi - lo <= 4.0 * margin) continue;

            std::vector<double> cand;
            cand.reserve(static_cast<std::size_t>(cfg.scan_points) + 26);
            for (int j = 1; j <= cfg.scan_points; ++j)
                cand.push_back(lo + (hi - lo) * j / (cfg.scan_points + 1.0));
            for (int q = 1; q <= 12; ++q) {
                double off = (hi - lo) * std::pow(10.0, -q);
                if (off <= margin) break;
                cand.push_back(lo + off);
                cand.push_back(hi - off);
            }
            cand.push_back(times[i]);
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

            auto eval_at = [&](double b) {
                times[i] = std::min(hi - margin, std::max(lo + margin, b));
                return f(ControlSchedule::from_pieces(times, s.values()));
            };

            double arg = times[i], val = best;
            std::size_t best_j = cand.size();
            for (std::size_t j = 0; j < cand.size(); ++j) {
                double v = eval_at(cand[j]);
                if (v < val - 1e-15) {
                    val = v;
                    arg = cand[j];
                    best_j = j;
                }
            }
            // Polish inside the bracket formed by the neighbours of the best
            // scan point (or around the incumbent when the scan found nothing).
            double bl = lo + margin, bh = hi - margin;
            if (best_j < cand.size()) {
                if (best_j > 0) bl = cand[best_j - 1];
                if (best_j + 1 < cand.size()) bh = cand[best_j + 1];
            } else {
                auto here = std::lower_bound(cand.begin(), cand.end(), arg);
                if (here != cand.begin()) bl = *(here - 1);
                if (here != cand.end()) bh = *here;
            }
            if (bh > bl + 4.0 * margin) {
                auto [g_arg, g_val] = golden_min(eval_at, bl, bh, cfg.golden_iters);
                if (g_val < val - 1e-15) {
                    val = g_val;
                    arg = g_arg;
                }
            }
            if (val < best - 1e-15) {
                best = val;
                times[i] = std::min(hi - margin, std::max(lo + margin, arg));
                s = ControlSchedule::from_pieces(times, s.values());
            }
        }
    }
    return {best, s};
}

inline Estimate minimize(const ControlProblem& p, double span, const Objective& f,
                         const SearchConfig& cfg) {
    if (p.control_grid.empty()) throw domain_error("estimate: empty control grid");
    if (cfg.pieces < 1 || cfg.keep < 1) throw domain_error("estimate: bad search config");
    const auto k = static_cast<std::size_t>(cfg.pieces);
    const std::size_t g = p.control_grid.size();

    std::vector<double> base_times(k);
    for (std::size_t j = 0; j < k; ++j)
        base_times[j] = span * static_cast<double>(j) / static_cast<double>(k);

    // Enumerate value patterns grid^pieces in lexicographic order (bounded by
    // max_patterns), keeping the `keep` best canonical schedules.
    auto better = [](const std::pair<double, ControlSchedule>& a,
                     const std::pair<double, ControlSchedule>& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    };
    std::vector<std::pair<double, ControlSchedule>> kept;
    std::vector<std::size_t> idx(k, 0);
    bool exhausted = false;
    std::size_t count = 0;
    for (;;) {
        if (count == cfg.max_patterns) {
            exhausted = true;
            break;
        }
        std::vector<double> vals(k);
        for (std::size_t j = 0; j < k; ++j) vals[j] = p.control_grid[idx[j]];
        ControlSchedule s = ControlSchedule::from_pieces(base_times, vals).canonical();
        double v = f(s);
        auto entry = std::make_pair(v, std::move(s));
        auto pos = std::lower_bound(kept.begin(), kept.end(), entry, better);
        kept.insert(pos, std::move(entry));
        if (kept.size() > static_cast<std::size_t>(cfg.keep)) kept.pop_back();
        ++count;

        std::size_t d = k;
        while (d > 0 && ++idx[d - 1] == g) idx[--d] = 0;
        if (d == 0) break;
    }
    if (kept.empty()) throw domain_error("estimate: pattern budget is zero");

    // Always refine the two-piece bang-bang family as well: its optimal
    // switch time can sit many decades below the horizon, in which case the
    // equal-piece patterns above rank it far outside the kept set even
    // though refinement would win from it.
    for (double ua : p.control_grid)
        for (double ub : p.control_grid) {
            if (ua == ub) continue;
            ControlSchedule s =
                ControlSchedule::from_pieces({0.0, span / 2.0}, {ua, ub}).canonical();
            double v = f(s);
            kept.emplace_back(v, std::move(s));
        }

    std::pair<double, ControlSchedule> best = kept.front();
    for (const auto& [v0, s0] : kept) {
        auto r = refine_breakpoints(f, s0, v0, span, cfg);
        if (better(r, best)) best = std::move(r);
    }
    return Estimate{best.first, best.second.canonical(), exhausted};
}

}  // namespace detail_search

inline Estimate estimate_Vt(const ControlProblem& p, const State& x0, double t,
                            const SearchConfig& cfg = {}) {
    if (!(t > 0.0)) throw domain_error("estimate_Vt: t must be positive");
    detail_search::Objective f = [&](const ControlSchedule& s) {
        return schedule_gamma_t(p, x0, s, t, cfg);
    };
    return detail_search::minimize(p, t, f, cfg);
}

inline Estimate estimate_Vlambda(const ControlProblem& p, const State& x0, double lambda,
                                 const SearchConfig& cfg = {}) {
    if (!(lambda > 0.0)) throw domain_error("estimate_Vlambda: lambda must be positive");
    const double span = std::max(std::log(1.0 / cfg.tail_tol) / lambda, 1.0);
    detail_search::Objective f = [&](const ControlSchedule& s) {
        return schedule_gamma_lambda(p, x0, s, lambda, cfg);
    };
    return detail_search::minimize(p, span, f, cfg);
}

// ---------------------------------------------------------------------------
// The double-integrator instance: f(x,y,u) = (y,u) on R+^2, cost 0 iff the
// position lies in [1,2].  Crossing times of the cost band are piecewise
// quadratic and solved in closed form, so payoffs are exact.
// ---------------------------------------------------------------------------

namespace detail_ce {

/// First s with position(s) >= level (position x, speed y, schedule s).
inline double first_reach(double x, double y, const ControlSchedule& sched, double level) {
    const auto& t = sched.times();
    const auto& u = sched.values();
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (x >= level) return t[j];
        const double len = j + 1 < t.size() ? t[j + 1] - t[j] : kInf;
        const double uj = u[j];
        double d = kInf;
        const double gap = level - x;
        if (uj > 0.0) {
            d = 2.0 * gap / (y + std::sqrt(y * y + 2.0 * uj * gap));
        } else if (y > 0.0) {
            d = gap / y;
        }
        if (d <= len) return t[j] + d;
        x += y * len + 0.5 * uj * len * len;
        y += uj * len;
    }
    return kInf;
}

/// First s with position(s) > level (strict exit through the band's top).
inline double first_exceed(double x, double y, const ControlSchedule& sched, double level) {
    const auto& t = sched.times();
    const auto& u = sched.values();
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double uj = u[j];
        if (x > level) return t[j];
        if (x >= level && (y > 0.0 || uj > 0.0)) return t[j];
        const double len = j + 1 < t.size() ? t[j + 1] - t[j] : kInf;
        double d = kInf;
        const double gap = level - x;
        if (gap > 0.0) {
            if (uj > 0.0)
                d = 2.0 * gap / (y + std::sqrt(y * y + 2.0 * uj * gap));
            else if (y > 0.0)
                d = gap / y;
        }
        // A touch inside a piece always has y > 0 or u > 0 there, so the
        // position immediately exceeds the level.
        if (d <= len) return t[j] + d;
        x += y * len + 0.5 * uj * len * len;
        y += uj * len;
    }
    return kInf;
}

inline BandCrossing crossings(std::span<const double> x0, const ControlSchedule& s) {
    return {first_reach(x0[0], x0[1], s, 1.0), first_exceed(x0[0], x0[1], s, 2.0)};
}

}  // namespace detail_ce

inline ControlProblem counterexample() {
    ControlProblem p;
    p.name = "counterexample";
    p.state_dim = 2;
    p.control_grid = {0.0, 1.0};
    p.dynamics = [](std::span<const double> x, double u, std::span<double> dx) {
        dx[0] = x[1];
        dx[1] = u;
    };
    p.cost = [](std::span<const double> x) {
        return x[0] >= 1.0 && x[0] <= 2.0 ? 0.0 : 1.0;
    };
    p.invariant = [](std::span<const double> x) {
        return x[0] >= -1e-9 && x[1] >= -1e-9;
    };
    p.exact_step = [](std::span<const double> x, double u, double dt, std::span<double> out) {
        out[0] = x[0] + x[1] * dt + 0.5 * u * dt * dt;
        out[1] = x[1] + u * dt;
    };
    p.crossings = [](std::span<const double> x, const ControlSchedule& s) {
        return detail_ce::crossings(x, s);
    };
    return p;
}

/// Compact smooth variant: cost 1 outside [0.9, 2.1], 0 on [1, 2], linear on
/// the two ramps; dynamics slow down by a factor (4-x) on x in [3,4], which
/// keeps Omega = {0 <= y <= sqrt(2x) <= 2 sqrt(2)} forward invariant.
inline ControlProblem smooth_variant() {
    ControlProblem p;
    p.name = "smooth";
    p.state_dim = 2;
    p.control_grid = {0.0, 0.5, 1.0};
    auto slow = [](double x) { return x <= 3.0 ? 1.0 : std::max(0.0, 4.0 - x); };
    p.dynamics = [slow](std::span<const double> x, double u, std::span<double> dx) {
        const double s = slow(x[0]);
        dx[0] = s * x[1];
        dx[1] = s * u;
    };
    p.cost = [](std::span<const double> x) {
        const double v = x[0];
        if (v <= 0.9) return 1.0;
        if (v < 1.0) return (1.0 - v) * 10.0;
        if (v <= 2.0) return 0.0;
        if (v < 2.1) return (v - 2.0) * 10.0;
        return 1.0;
    };
    p.invariant = [](std::span<const double> x) {
        const double tol = 1e-5;
        return x[1] >= -tol && x[1] * x[1] <= 2.0 * x[0] + tol && x[0] <= 4.0 + tol;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Analytic limit values of the counterexample.
// ---------------------------------------------------------------------------

inline double analytic_V(double x0, double y0) {
    if (x0 < 0.0 || y0 < 0.0) throw domain_error("analytic_V: state must lie in R+^2");
    if (y0 == 0.0 && x0 >= 1.0 && x0 <= 2.0) return 0.0;
    if (y0 > 0.0 || x0 > 2.0) return 1.0;
    return (1.0 - x0) / (2.0 - x0);
}

inline double analytic_W(double x0, double y0) {
    if (x0 < 0.0 || y0 < 0.0) throw domain_error("analytic_W: state must lie in R+^2");
    if (y0 == 0.0 && x0 >= 1.0 && x0 <= 2.0) return 0.0;
    if (y0 > 0.0 || x0 > 2.0) return 1.0;
    return 1.0 - std::pow(1.0 - x0, 1.0 - x0) / std::pow(2.0 - x0, 2.0 - x0);
}

// ---------------------------------------------------------------------------
// Randomized audits.
// ---------------------------------------------------------------------------

/// Random piecewise-constant schedule with 1..max_pieces pieces, breakpoints
/// uniform in (0, horizon), values uniform in [u_lo, u_hi].
inline ControlSchedule random_schedule(std::mt19937_64& rng, double horizon,
                                       int max_pieces, double u_lo, double u_hi) {
    std::uniform_int_distribution<int> pieces_dist(1, max_pieces);
    std::uniform_real_distribution<double> time_dist(0.0, horizon);
    std::uniform_real_distribution<double> value_dist(u_lo, u_hi);
    const int m = pieces_dist(rng);
    std::vector<double> times{0.0};
    for (int i = 1; i < m; ++i) times.push_back(time_dist(rng));
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<double> values(times.size());
    for (auto& v : values) v = value_dist(rng);
    return ControlSchedule::from_pieces(std::move(times), std::move(values));
}

/// Simulates n_random random schedules on the counterexample from (0,0) and
/// checks the proved payoff floors gamma_t >= 1/2 and gamma_lambda >= 3/4,
/// with slack 10*h covering quadrature error.  Quadrature payoffs are also
/// cross-checked against the closed-form crossing payoffs; disagreement
/// signals an integrator or payoff bug.
inline ValueReport lower_bound_audit(std::size_t n_random, double t, double lambda,
                                     std::uint64_t seed, double h = 1e-2) {
    if (n_random < 1) throw domain_error("lower_bound_audit: n_random must be >= 1");
    if (!(t > 0.0) || !(lambda > 0.0))
        throw domain_error("lower_bound_audit: t and lambda must be positive");

    const ControlProblem p = counterexample();
    const State x0{0.0, 0.0};
    const double slack = 10.0 * h;
    const double tail_tol = 1e-6;
    const double horizon = std::max(t, (std::log(1.0 / tail_tol) + 1.0) / lambda);

    ValueReport rep("lower_bound_audit",
                    {"index", "gamma_t", "gamma_lambda", "exact_t", "exact_lambda"});
    rep.add_meta("n_random", static_cast<double>(n_random));
    rep.add_meta("t", t);
    rep.add_meta("lambda", lambda);
    rep.add_meta("seed", static_cast<double>(seed));
    rep.add_meta("slack", slack);

    std::mt19937_64 rng(seed);
    double min_t = kInf, min_lambda = kInf;
    for (std::size_t i = 0; i < n_random; ++i) {
        ControlSchedule s = random_schedule(rng, t, 6, p.u_lo, p.u_hi);
        plays::Trajectory x = simulate(p, x0, s, horizon, h);
        const double gt = plays::gamma_t(x, t);
        const double gl = plays::gamma_lambda(x, lambda, tail_tol);
        const BandCrossing c = p.crossings(x0, s);
        const double et = crossing_gamma_t(c, t);
        const double el = crossing_gamma_lambda(c, lambda);
        min_t = std::min(min_t, gt);
        min_lambda = std::min(min_lambda, gl);
        const bool ok = gt >= 0.5 - slack && gl >= 0.75 - slack &&
                        std::abs(gt - et) <= slack && std::abs(gl - el) <= slack;
        rep.add_row("draw", {static_cast<double>(i), gt, gl, et, el}, ok);
    }
    rep.add_row("min_observed", {static_cast<double>(n_random), min_t, min_lambda, 0.5, 0.75},
                min_t >= 0.5 - slack && min_lambda >= 0.75 - slack);
    return rep;
}

/// Simulates random schedules from sampled admissible states and reports any
/// invariant violation (forward-invariance check for bounded instances).
inline ValueReport invariance_audit(const ControlProblem& p,
                                    const std::function<State(std::mt19937_64&)>& sample_state,
                                    std::size_t n_random, double horizon, double h,
                                    std::uint64_t seed) {
    ValueReport rep("invariance_audit", {"index", "violation_time"});
    rep.add_meta("problem", p.name);
    rep.add_meta("n_random", static_cast<double>(n_random));
    rep.add_meta("horizon", horizon);
    rep.add_meta("seed", static_cast<double>(seed));
    std::mt19937_64 rng(seed);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < n_random; ++i) {
        State x0 = sample_state(rng);
        ControlSchedule s = random_schedule(rng, horizon, 6, p.u_lo, p.u_hi);
        double when = -1.0;
        try {
            simulate(p, x0, s, horizon, h);
        } catch (const feasibility_error& e) {
            when = e.first_violation_time;
            ++violations;
        }
        rep.add_row("draw", {static_cast<double>(i), when}, when < 0.0);
    }
    rep.add_row("violations", {static_cast<double>(n_random), static_cast<double>(violations)},
                violations == 0);
    return rep;
}

}  // namespace tauberian::control
