#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tauberian/bridge.hpp"
#include "tauberian/common.hpp"
#include "tauberian/control.hpp"
#include "tauberian/discrete.hpp"
#include "tauberian/generators.hpp"
#include "tauberian/kernel.hpp"
#include "tauberian/means.hpp"
#include "tauberian/plays.hpp"
#include "tauberian/report.hpp"

namespace tauberian::experiments {

struct RunOptions {
    std::vector<double> t_grid;          // empty => per-experiment default
    std::vector<double> lambda_grid;     // empty => per-experiment default
    std::vector<std::size_t> n_grid;     // empty => per-experiment default
    std::uint64_t seed = 7;
    double step = 1e-2;
    std::string graph_path;              // discrete: run on an external instance
    std::string preset = "switchback";   // discrete: built-in instance name
    control::SearchConfig search;
};

namespace detail_exp {

inline std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) {
    return v.empty() ? std::move(d) : v;
}
inline std::vector<std::size_t> or_default(const std::vector<std::size_t>& v,
                                           std::vector<std::size_t> d) {
    return v.empty() ? std::move(d) : v;
}

inline control::SearchConfig with_step(const RunOptions& o) {
    control::SearchConfig cfg = o.search;
    cfg.h = o.step;
    return cfg;
}

}  // namespace detail_exp

// ---------------------------------------------------------------------------
// means: Cesaro/Abel tables for two canonical bounded sequences.  The
// alternating sequence has both means converging to 1/2; the doubling-blocks
// sequence leaves both oscillating, which the liminf/limsup window exposes.
// ---------------------------------------------------------------------------

inline std::vector<ValueReport> run_means(const RunOptions& o) {
    const auto n_grid = detail_exp::or_default(
        o.n_grid, {8, 16, 64, 256, 1024, 16384, 131072});
    const auto lam_grid = detail_exp::or_default(
        o.lambda_grid, {0.5, 0.1, 0.01, 1e-3, 1e-4});

    means::BoundedSequence alternating = means::BoundedSequence::periodic({1.0, 0.0}, 0.0, 1.0);
    means::BoundedSequence blocks = means::BoundedSequence::from_rule(
        [](std::size_t k) {
            // 1 on [2^j, 2^{j+1}) for even j: Cesaro means sweep [1/3, 2/3].
            std::size_t j = 0;
            while ((std::size_t{2} << j) <= k) ++j;
            return (j % 2 == 0) ? 1.0 : 0.0;
        },
        0.0, 1.0);

    ValueReport alt = means::hardy_littlewood_report(alternating, n_grid, lam_grid);
    alt.set_title("means_alternating");
    ValueReport blk = means::hardy_littlewood_report(blocks, n_grid, lam_grid);
    blk.set_title("means_doubling_blocks");

    // Convergence verdicts on top of the raw tables.
    // Verdicts: the alternating means both settle at 1/2 (judge the grid
    // tails, coarse entries legitimately sit away from the limit); the blocks
    // sequence keeps oscillating, visible as spread across the grid.
    ValueReport verdict("means_verdict", {"cesaro_tail_or_osc", "abel_tail_or_osc", "limit"});
    auto stats = [&](const ValueReport& r, const std::string& label) {
        double lo = control::kInf, hi = -control::kInf, last = 0.0;
        for (const auto& row : r.rows())
            if (row.label == label) {
                lo = std::min(lo, row.values.back());
                hi = std::max(hi, row.values.back());
                last = row.values.back();
            }
        return std::pair{hi - lo, last};
    };
    const auto [alt_c_osc, alt_c_last] = stats(alt, "V_n");
    const auto [alt_a_osc, alt_a_last] = stats(alt, "V_lambda");
    verdict.add_row("alternating", {std::abs(alt_c_last - 0.5), std::abs(alt_a_last - 0.5), 0.5},
                    std::abs(alt_c_last - 0.5) <= 1e-3 && std::abs(alt_a_last - 0.5) <= 1e-3);
    const auto [blk_c_osc, blk_c_last] = stats(blk, "V_n");
    const auto [blk_a_osc, blk_a_last] = stats(blk, "V_lambda");
    verdict.add_row("doubling_blocks", {blk_c_osc, blk_a_osc, 0.5},
                    blk_c_osc >= 0.2 && blk_a_osc >= 0.05);
    return {alt, blk, verdict};
}

// ---------------------------------------------------------------------------
// kernel: mass margins of the two localization lemmas, t-independence of the
// second, and the convexity identity residual under step halving.
// ---------------------------------------------------------------------------

inline std::vector<ValueReport> run_kernel(const RunOptions& o) {
    std::vector<ValueReport> out;
    const std::vector<double> eps_grid{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};

    ValueReport li("lemma_i_margins", {"eps", "mass", "bound", "margin"});
    li.add_meta("t", 100.0);
    for (double eps : eps_grid) {
        auto m = kernel::lemma_i_margin(100.0, eps);
        li.add_row("eps", {eps, m.mass_value, m.bound, m.mass_value - m.bound}, m.pass);
    }
    li.add_meta("threshold_cap", kernel::lemma_i_threshold());
    out.push_back(std::move(li));

    // The window [eps*t, (1-eps)*t] degenerates as eps -> 1/2, so this table
    // stops at 0.4; the delta envelope 3*sqrt(eps) is coarse but honest.
    ValueReport lii("lemma_ii_margins", {"eps", "mass", "bound", "t_spread"});
    const std::vector<double> t_probe{1.0, 10.0, 100.0};
    for (double eps : eps_grid) {
        if (eps > 0.4) continue;
        const double delta = std::min(3.0 * std::sqrt(eps), 0.999);
        double lo = 2.0, hi = -1.0;
        kernel::MarginResult m{0.0, 0.0, false};
        for (double t : t_probe) {
            m = kernel::lemma_ii_margin(t, eps, delta);
            lo = std::min(lo, m.mass_value);
            hi = std::max(hi, m.mass_value);
        }
        lii.add_row("eps", {eps, m.mass_value, m.bound, hi - lo},
                    m.pass && hi - lo <= 1e-12);
    }
    out.push_back(std::move(lii));

    ValueReport conv("convexity_residual", {"lambda", "residual_h", "residual_h2", "ratio"});
    conv.add_meta("h", o.step);
    const double horizon = 40.0;
    auto cosine = [&](double h) {
        const auto n = static_cast<std::size_t>(std::llround(horizon / h));
        plays::Trajectory x(0, h);
        for (std::size_t k = 0; k <= n; ++k)
            x.append({}, 0.5 * (1.0 + std::cos(static_cast<double>(k) * h)));
        return x;
    };
    const plays::Trajectory smooth_h = cosine(o.step);
    const plays::Trajectory smooth_h2 = cosine(o.step / 2.0);
    for (double lam : detail_exp::or_default(o.lambda_grid, {0.5, 0.1, 0.01})) {
        const double r1 = kernel::convexity_residual(smooth_h, lam, horizon);
        const double r2 = kernel::convexity_residual(smooth_h2, lam, horizon);
        const double ratio = r2 > 0.0 ? r1 / r2 : control::kInf;
        conv.add_row("lambda", {lam, r1, r2, ratio},
                     r1 <= 1e-3 && (r2 <= 0.35 * r1 || r2 <= 1e-12));
    }
    out.push_back(std::move(conv));

    ValueReport quad("mass_quadrature", {"lambda", "alpha", "beta", "closed", "numeric", "diff"});
    std::mt19937_64 rng = gen::make_rng(o.seed);
    std::uniform_real_distribution<double> lam_d(0.02, 1.5), len_d(0.1, 8.0);
    for (int i = 0; i < 8; ++i) {
        const double lam = lam_d(rng);
        const double a = len_d(rng), b = a + len_d(rng);
        const kernel::KernelMass k{lam};
        const double closed = kernel::mass(k, a, b);
        // Simpson on a fine grid as the independent check.
        const int n = 4000;
        const double h = (b - a) / n;
        double s = kernel::mu_density(k, a) + kernel::mu_density(k, b);
        for (int j = 1; j < n; ++j)
            s += kernel::mu_density(k, a + j * h) * (j % 2 ? 4.0 : 2.0);
        const double numeric = s * h / 3.0;
        quad.add_row("draw", {lam, a, b, closed, numeric, std::abs(closed - numeric)},
                     std::abs(closed - numeric) <= 1e-10);
    }
    out.push_back(std::move(quad));
    return out;
}

// ---------------------------------------------------------------------------
// counterexample: horizon and discount value grids from (0,0), the limit
// mismatch, analytic tables, non-uniformity probes, monotonicity along a
// played trajectory, and the random lower-bound audit.
// ---------------------------------------------------------------------------

inline std::vector<ValueReport> run_counterexample(const RunOptions& o) {
    const control::ControlProblem p = control::counterexample();
    const control::State origin{0.0, 0.0};
    const control::SearchConfig cfg = detail_exp::with_step(o);
    const auto t_grid = detail_exp::or_default(o.t_grid, {1e2, 1e3, 1e4});
    const auto lam_grid = detail_exp::or_default(o.lambda_grid, {1e-1, 1e-2, 1e-3});
    std::vector<ValueReport> out;

    ValueReport vt("value_horizon", {"t", "estimate", "lower", "upper"});
    vt.add_meta("start", "(0,0)");
    double prev = control::kInf;
    double last_vt = 0.0;
    std::size_t vt_breaks = 0;
    for (double t : t_grid) {
        const double v = control::estimate_Vt(p, origin, t, cfg).value;
        const bool window = v >= 0.5 && v <= 0.55;
        if (v >= prev) ++vt_breaks;
        vt.add_row("t", {t, v, 0.5, 0.55}, window);
        prev = v;
        last_vt = v;
    }
    vt.add_row("strictly_decreasing", {static_cast<double>(vt_breaks), 0.0, 0.0, 0.0},
               vt_breaks == 0);
    out.push_back(std::move(vt));

    ValueReport vl("value_discount", {"lambda", "estimate", "lower", "upper"});
    vl.add_meta("start", "(0,0)");
    prev = control::kInf;
    double last_vl = 0.0;
    std::size_t vl_breaks = 0;
    for (double lam : lam_grid) {
        const double v = control::estimate_Vlambda(p, origin, lam, cfg).value;
        const bool window = v >= 0.75 && v <= 0.80;
        if (v >= prev) ++vl_breaks;
        vl.add_row("lambda", {lam, v, 0.75, 0.80}, window);
        prev = v;
        last_vl = v;
    }
    vl.add_row("strictly_decreasing", {static_cast<double>(vl_breaks), 0.0, 0.0, 0.0},
               vl_breaks == 0);
    out.push_back(std::move(vl));

    ValueReport gap("limit_mismatch", {"v_discount", "v_horizon", "difference"});
    gap.add_row("tail_of_grids", {last_vl, last_vt, last_vl - last_vt},
                std::abs(last_vl - last_vt - 0.25) <= 0.01);
    out.push_back(std::move(gap));

    ValueReport tab("analytic_limits", {"x", "y", "V", "W"});
    const double pts[5][2] = {{0.0, 0.0}, {0.5, 0.0}, {1.5, 0.0}, {2.5, 0.0}, {0.0, 0.3}};
    for (const auto& q : pts)
        tab.add_row("state",
                    {q[0], q[1], control::analytic_V(q[0], q[1]), control::analytic_W(q[0], q[1])},
                    true);
    out.push_back(std::move(tab));

    ValueReport ex("estimator_excess", {"parameter", "estimate", "limit", "excess"});
    {
        const double t = t_grid.back();
        const double lim = control::analytic_V(0.0, 0.0);
        ex.add_row("horizon", {t, last_vt, lim, last_vt - lim},
                   last_vt - lim >= -1e-6 && last_vt - lim <= 0.07);
        const double lam = lam_grid.back();
        const double wlim = control::analytic_W(0.0, 0.0);
        ex.add_row("discount", {lam, last_vl, wlim, last_vl - wlim},
                   last_vl - wlim >= -1e-6 && last_vl - wlim <= 0.07);
    }
    out.push_back(std::move(ex));

    // Two nearby starts with wildly different finite-horizon values: the
    // convergence V_t -> V cannot be uniform in the state.
    ValueReport nu("nonuniformity_probe", {"x", "y", "parameter", "estimate", "threshold"});
    {
        const double t = 1e3, lam = 1e-3;
        const double a = control::estimate_Vt(p, {1.0, 0.01}, t, cfg).value;
        nu.add_row("moving", {1.0, 0.01, t, a, 0.85}, a >= 0.85);
        const double b = control::estimate_Vt(p, {1.0, 0.0}, t, cfg).value;
        nu.add_row("resting", {1.0, 0.0, t, b, 1e-6}, b <= 1e-6);
        const double c = control::estimate_Vlambda(p, {1.0, 0.01}, lam, cfg).value;
        nu.add_row("moving_discount", {1.0, 0.01, lam, c, 0.85}, c >= 0.85);
    }
    out.push_back(std::move(nu));

    // Along any play the tail value can only improve: compare the estimate
    // from X(s) with the estimate from the start, minus search slack.
    ValueReport mono("value_monotonicity", {"s", "t", "from_start", "from_Xs"});
    {
        const double t = 50.0, s = 5.0;
        const double base = control::estimate_Vt(p, origin, t, cfg).value;
        const control::ControlSchedule plays_[3] = {
            control::ControlSchedule::constant(0.0),
            control::ControlSchedule::one_switch(2.0 / t, 1.0, 0.0),
            control::ControlSchedule::constant(1.0)};
        for (const auto& w : plays_) {
            plays::Trajectory x = control::simulate(p, origin, w, s, o.step);
            auto xs = x.state(x.size() - 1);
            const double v = control::estimate_Vt(p, {xs[0], xs[1]}, t, cfg).value;
            mono.add_row("schedule", {s, t, base, v}, v >= base - 0.02);
        }
    }
    out.push_back(std::move(mono));

    out.push_back(control::lower_bound_audit(200, 40.0, 0.05, o.seed, o.step));
    return out;
}

// ---------------------------------------------------------------------------
// smooth: the Lipschitz variant on a compact invariant region; same limit
// structure with a continuous cost, so the value estimates live strictly
// between 0 and 1 and random plays never leave the region.
// ---------------------------------------------------------------------------

/// Search budget for instances without closed-form payoffs, where every
/// candidate costs a full RK4 integration.
inline control::SearchConfig smooth_search(const RunOptions& o) {
    control::SearchConfig cfg = detail_exp::with_step(o);
    cfg.pieces = 5;
    cfg.keep = 3;
    cfg.rounds = 1;
    cfg.scan_points = 10;
    cfg.golden_iters = 18;
    cfg.max_patterns = 256;
    return cfg;
}

inline std::vector<ValueReport> run_smooth(const RunOptions& o) {
    const control::ControlProblem p = control::smooth_variant();
    const control::State origin{0.0, 0.0};
    const control::SearchConfig cfg = smooth_search(o);
    std::vector<ValueReport> out;

    ValueReport cost("smooth_cost_profile", {"x", "cost", "expected"});
    const double probes[5][2] = {
        {1.5, 0.0}, {0.95, 0.5}, {0.9, 1.0}, {2.05, 0.5}, {2.2, 1.0}};
    for (const auto& q : probes) {
        const double state[2] = {q[0], 0.0};
        const double c = p.cost(std::span<const double>(state, 2));
        cost.add_row("x", {q[0], c, q[1]}, std::abs(c - q[1]) <= 1e-12);
    }
    out.push_back(std::move(cost));

    ValueReport vt("smooth_value_horizon", {"t", "estimate", "lower", "upper"});
    for (double t : detail_exp::or_default(o.t_grid, {20.0, 60.0})) {
        const double v = control::estimate_Vt(p, origin, t, cfg).value;
        vt.add_row("t", {t, v, 0.35, 0.85}, v >= 0.35 && v <= 0.85);
    }
    out.push_back(std::move(vt));

    auto sampler = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> xd(0.2, 3.8), ud(0.0, 0.95);
        const double x = xd(rng);
        const double y = ud(rng) * std::min(std::sqrt(2.0 * x), 2.0 * std::sqrt(2.0));
        return control::State{x, y};
    };
    out.push_back(control::invariance_audit(p, sampler, 500, 20.0, o.step, o.seed));
    return out;
}

// ---------------------------------------------------------------------------
// discrete: value iteration tables, min-mean-cycle limit, monotonicity along
// optimal moves, and the Tauberian gap table on a finite successor graph.
// ---------------------------------------------------------------------------

inline discrete::DiscreteProblem preset_graph(const std::string& name) {
    discrete::DiscreteProblem p;
    if (name == "switchback") {
        // Two competing cycles (means 1/2 and 1/3) plus a cost-1 trap.
        p.ids = {0, 1, 2, 3, 4, 5};
        p.cost = {1.0, 0.0, 0.0, 0.0, 1.0, 1.0};
        p.succ = {{1, 2}, {0}, {3}, {4}, {2, 5}, {5}};
    } else if (name == "twocycle") {
        p.ids = {0, 1};
        p.cost = {1.0, 0.0};
        p.succ = {{1}, {0}};
    } else {
        throw domain_error("unknown preset graph: " + name);
    }
    p.normalize_successors();
    p.validate();
    return p;
}

inline std::vector<ValueReport> run_discrete(const RunOptions& o) {
    discrete::DiscreteProblem p = o.graph_path.empty()
                                      ? preset_graph(o.preset)
                                      : discrete::DiscreteProblem::parse_file(o.graph_path);
    const auto n_grid =
        detail_exp::or_default(o.n_grid, {1, 2, 3, 5, 10, 100, 1000, 10000});
    std::vector<ValueReport> out;

    ValueReport vn("discrete_values", {"n", "v_n_start", "v_lambda_start", "diff"});
    vn.add_meta("states", static_cast<double>(p.size()));
    const double mmc0 = discrete::min_mean_cycle(p, 0);
    vn.add_meta("mmc_start", mmc0);
    for (std::size_t n : n_grid) {
        const double lam = 1.0 / static_cast<double>(n);
        const double a = discrete::value_n(p, n).values[0];
        const double b = lam >= 1.0 ? p.cost[0] : discrete::value_lambda(p, lam).values[0];
        // Both averages are barycenters of stage costs.
        const bool ok = a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0;
        vn.add_row("n", {static_cast<double>(n), a, b, std::abs(a - b)}, ok);
    }
    out.push_back(std::move(vn));

    out.push_back(discrete::monotonicity_audit(p, 64, {0.05, 0.01}));
    std::vector<std::size_t> gap_grid;
    for (std::size_t n : n_grid)
        if (n >= 2) gap_grid.push_back(n);
    out.push_back(discrete::tauberian_gap(p, gap_grid));
    return out;
}

// ---------------------------------------------------------------------------
// bridge: discretize the counterexample to a successor graph and audit both
// engines against each other; plus the exact kernel-gap table driving the
// discount bound.
// ---------------------------------------------------------------------------

inline bridge::BridgedProblem bridged_counterexample(double step) {
    const control::ControlProblem p = control::counterexample();
    bridge::DiscretizeOptions opts;
    opts.h = step;
    opts.absorb = [](std::span<const double> x) -> std::optional<double> {
        // Past the cost band with positive speed: cost 1 forever.
        if (x[0] > 2.0 + 2e-3) return 1.0;
        return std::nullopt;
    };
    return bridge::discretize(
        p, {0.0, 0.0},
        bridge::standard_unit_family({1.0 / 15.0, 0.1, 0.2, 0.25, 0.4}), opts);
}

inline std::vector<ValueReport> run_bridge(const RunOptions& o) {
    std::vector<ValueReport> out;

    ValueReport kg("kernel_gap", {"lambda", "E", "bound", "full", "two_E_diff"});
    double prev_e = control::kInf;
    for (double lam : detail_exp::or_default(o.lambda_grid, {0.5, 0.1, 0.01, 1e-3})) {
        const bridge::GapResult g = bridge::kernel_gap(lam);
        const double full = bridge::full_gap(lam);
        const double two_e_diff = std::abs(full - 2.0 * g.e_value);
        kg.add_row("lambda", {lam, g.e_value, g.bound, full, two_e_diff},
                   g.pass && g.e_value < prev_e && two_e_diff <= 1e-9);
        prev_e = g.e_value;
    }
    out.push_back(std::move(kg));

    const bridge::BridgedProblem bp = bridged_counterexample(o.step);
    const control::SearchConfig cfg = detail_exp::with_step(o);
    out.push_back(bridge::horizon_error_audit(
        bp, detail_exp::or_default(o.t_grid, {5.0, 10.0, 20.0, 30.0}), cfg));
    out.push_back(bridge::discount_error_audit(
        bp, detail_exp::or_default(o.lambda_grid, {0.5, 0.1}), cfg));
    return out;
}

// ---------------------------------------------------------------------------
// Registry.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "means", "kernel", "counterexample", "smooth", "discrete", "bridge"};
    return names;
}

inline std::vector<ValueReport> run_experiment(const std::string& name, const RunOptions& o) {
    if (name == "means") return run_means(o);
    if (name == "kernel") return run_kernel(o);
    if (name == "counterexample") return run_counterexample(o);
    if (name == "smooth") return run_smooth(o);
    if (name == "discrete") return run_discrete(o);
    if (name == "bridge") return run_bridge(o);
    if (name == "all") {
        std::vector<ValueReport> all;
        for (const auto& n : experiment_names()) {
            RunOptions scoped = o;
            // Grid overrides are experiment-specific; "all" runs defaults.
            scoped.t_grid.clear();
            scoped.lambda_grid.clear();
            scoped.n_grid.clear();
            auto part = run_experiment(n, scoped);
            for (auto& rep : part) all.push_back(std::move(rep));
        }
        return all;
    }
    throw domain_error("unknown experiment: " + name);
}

}  // namespace tauberian::experiments
