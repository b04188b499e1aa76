#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/control.hpp"
#include "tauberian/discrete.hpp"
#include "tauberian/report.hpp"

namespace tauberian::bridge {

// ---------------------------------------------------------------------------
// The two kernel-comparison integrals of the appendix reduction, evaluated
// exactly: on [k, k+1) the integrand is (1-lambda)^k - e^{-lambda t} up to
// sign, its antiderivative is elementary, and the sign change sits at
// t* = k*r with r = -ln(1-lambda)/lambda (so e^{-lambda t*} = (1-lambda)^k).
// Positive parts exist only while k*r < k+1, i.e. for finitely many k.
// ---------------------------------------------------------------------------

struct GapResult {
    double e_value;
    double bound;
    bool pass;
};

/// E(lambda) = lambda * integral of [(1-lambda)^{floor t} - e^{-lambda t}]_+;
/// bounded by e^lambda - 1.
inline GapResult kernel_gap(double lambda, double s_max = control::kInf) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw domain_error("kernel_gap: lambda must lie in (0,1)");
    if (!(s_max > 0.0)) throw domain_error("kernel_gap: s_max must be positive");
    const double q = 1.0 - lambda;
    const double r = -std::log1p(-lambda) / lambda;  // > 1
    double e = 0.0;
    double c = 1.0;  // (1-lambda)^k
    for (double k = 0.0; k < s_max; k += 1.0, c *= q) {
        const double a = k * r;
        if (a >= k + 1.0 || c < 1e-300) break;
        const double b = std::min(k + 1.0, s_max);
        if (b <= a) break;
        e += lambda * c * (b - a) - (std::exp(-lambda * a) - std::exp(-lambda * b));
    }
    const double bound = std::expm1(lambda);
    return {e, bound, e <= bound};
}

/// lambda * integral of |(1-lambda)^{floor t} - e^{-lambda t}|; equals
/// 2*E(lambda) because both kernels have total mass 1.
inline double full_gap(double lambda, double s_max = control::kInf) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw domain_error("full_gap: lambda must lie in (0,1)");
    if (!(s_max > 0.0)) throw domain_error("full_gap: s_max must be positive");
    const double q = 1.0 - lambda;
    const double r = -std::log1p(-lambda) / lambda;
    double total = 0.0;
    double c = 1.0;
    for (double k = 0.0; k < s_max; k += 1.0, c *= q) {
        const double hi = std::min(k + 1.0, s_max);
        const double ea = std::exp(-lambda * k);
        if (c < 1e-300 && ea < 1e-300) break;
        const double split = std::min(std::max(k * r, k), hi);
        // e^{-lambda t} >= c on [k, split), below afterwards.
        const double neg = (ea - std::exp(-lambda * split)) - lambda * c * (split - k);
        const double pos = lambda * c * (hi - split) - (std::exp(-lambda * split) - std::exp(-lambda * hi));
        total += std::max(neg, 0.0) + std::max(pos, 0.0);
        if (hi == s_max) break;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Discretization of a continuous problem to the product space
// Omega x [0,1]: states are (quantized endpoint, one-unit integrated cost),
// actions are a finite family of one-unit schedules, and the discrete cost
// of (omega, x) is x.
// ---------------------------------------------------------------------------

struct DiscretizeOptions {
    int depth = 64;              // documented audit horizon; expansion runs to closure
    double quant = 1e-3;         // state lattice pitch
    double cost_quant = 1e-6;    // unit-cost resolution
    std::size_t node_cap = 2'000'000;
    double h = 1e-2;             // integration step when the instance has no exact hooks
    // Optional reduction: maps states that can never re-enter the interesting
    // region to a constant-cost absorbing node (keeps the expansion finite).
    std::function<std::optional<double>(std::span<const double>)> absorb;
};

struct BridgedProblem {
    control::ControlProblem base;
    control::State x0;
    std::vector<control::ControlSchedule> unit_schedules;
    discrete::DiscreteProblem graph;
    std::size_t start_index = 0;
    double quant = 0.0;
    double cost_quant = 0.0;
    int depth = 0;
    // Representative continuous state per node; empty for absorbing nodes.
    std::vector<std::vector<double>> rep_state;
};

inline BridgedProblem discretize(const control::ControlProblem& p, const control::State& x0,
                                 std::vector<control::ControlSchedule> unit_schedules,
                                 const DiscretizeOptions& opts = {}) {
    if (opts.depth < 1) throw domain_error("discretize: depth must be >= 1");
    if (!(opts.quant > 0.0) || !(opts.cost_quant > 0.0))
        throw domain_error("discretize: quantization pitches must be positive");
    if (unit_schedules.empty()) throw domain_error("discretize: empty unit schedule family");
    if (x0.size() != p.state_dim) throw domain_error("discretize: state dimension mismatch");
    if (opts.absorb && opts.absorb(x0))
        throw domain_error("discretize: start state is already absorbing");

    constexpr long long kAbsorbTag = std::numeric_limits<long long>::min();
    control::SearchConfig quad;
    quad.h = opts.h;

    std::map<std::vector<long long>, std::size_t> index;
    std::vector<std::vector<double>> rep;
    std::vector<double> node_cost;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::size_t> queue;

    auto snap = [&](const std::vector<double>& state) {
        std::vector<long long> coords(state.size());
        for (std::size_t i = 0; i < state.size(); ++i)
            coords[i] = std::llround(state[i] / opts.quant);
        return coords;
    };
    auto create = [&](std::vector<long long> key, std::vector<double> state, double cost,
                      bool absorbing) {
        auto [it, fresh] = index.try_emplace(std::move(key), rep.size());
        if (fresh) {
            if (rep.size() >= opts.node_cap)
                throw capacity_error("discretize: node cap exceeded", rep.size());
            rep.push_back(std::move(state));
            node_cost.push_back(cost);
            succ.emplace_back();
            if (absorbing)
                succ.back().push_back(it->second);  // self-loop, never expanded
            else
                queue.push_back(it->second);
        }
        return it->second;
    };

    // Start node: accumulated cost 0 by convention (the appendix sums never
    // count the initial state, see the audits' convention adapters).
    {
        std::vector<long long> key = snap(x0);
        std::vector<double> state(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i)
            state[i] = static_cast<double>(key[i]) * opts.quant;
        key.push_back(0);
        create(std::move(key), std::move(state), 0.0, false);
    }

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t z = queue[head];
        const std::vector<double> from = rep[z];  // copy: rep may reallocate
        for (const auto& sched : unit_schedules) {
            double unit_cost = control::schedule_gamma_t(p, from, sched, 1.0, quad);
            unit_cost = std::min(1.0, std::max(0.0, unit_cost));
            const long long bucket = std::llround(unit_cost / opts.cost_quant);
            const double stored_cost = static_cast<double>(bucket) * opts.cost_quant;

            plays::Trajectory path =
                control::simulate(p, from, sched, 1.0, p.exact_step ? 1.0 : opts.h);
            auto end_span = path.state(path.size() - 1);
            std::vector<double> endpoint(end_span.begin(), end_span.end());

            std::size_t target;
            std::optional<double> absorbed =
                opts.absorb ? opts.absorb(endpoint) : std::nullopt;
            if (absorbed) {
                const double c = std::min(1.0, std::max(0.0, *absorbed));
                const long long cb = std::llround(c / opts.cost_quant);
                target = create({kAbsorbTag, cb}, {},
                                static_cast<double>(cb) * opts.cost_quant, true);
            } else {
                std::vector<long long> key = snap(endpoint);
                std::vector<double> state(endpoint.size());
                for (std::size_t i = 0; i < endpoint.size(); ++i)
                    state[i] = static_cast<double>(key[i]) * opts.quant;
                key.push_back(bucket);
                target = create(std::move(key), std::move(state), stored_cost, false);
            }
            succ[z].push_back(target);
        }
    }

    BridgedProblem bp;
    bp.base = p;
    bp.x0 = x0;
    bp.unit_schedules = std::move(unit_schedules);
    bp.start_index = 0;
    bp.quant = opts.quant;
    bp.cost_quant = opts.cost_quant;
    bp.depth = opts.depth;
    bp.rep_state = std::move(rep);
    bp.graph.ids.resize(node_cost.size());
    for (std::size_t i = 0; i < node_cost.size(); ++i)
        bp.graph.ids[i] = static_cast<long long>(i);
    bp.graph.cost = std::move(node_cost);
    bp.graph.succ = std::move(succ);
    bp.graph.normalize_successors();
    bp.graph.validate();
    return bp;
}

// ---------------------------------------------------------------------------
// Cross-engine audits.  The discrete module counts the start state's cost
// first (y_1 = z), while the appendix sums start at the first successor
// (omega_0 is not counted); with the bridged start carrying cost 0 the two
// conventions convert exactly:
//   v_n^app(start)      = (n+1)/n * v_{n+1}^disc(start)
//   v_lambda^app(start) = v_lambda^disc(start) / (1-lambda).
// ---------------------------------------------------------------------------

/// Compares the control-side estimate of V_t with the bridged v_{floor t}
/// against the appendix envelope 2/floor(t) plus declared slack.
inline ValueReport horizon_error_audit(const BridgedProblem& bp,
                                       const std::vector<double>& t_grid,
                                       const control::SearchConfig& cfg = {},
                                       double slack = 0.08) {
    if (t_grid.empty()) throw domain_error("horizon_error_audit: empty t grid");
    ValueReport rep("horizon_error_audit", {"t", "V_t_estimate", "v_n_bridged", "diff", "bound"});
    rep.add_meta("nodes", static_cast<double>(bp.graph.size()));
    rep.add_meta("quant", bp.quant);
    rep.add_meta("slack", slack);
    for (double t : t_grid) {
        const auto n = static_cast<std::size_t>(std::floor(t + 1e-12));
        if (n < 1) throw domain_error("horizon_error_audit: t must be >= 1");
        const double est = control::estimate_Vt(bp.base, bp.x0, t, cfg).value;
        discrete::ValueTable vt = discrete::value_n(bp.graph, n + 1);
        const double v_app = vt.values[bp.start_index] * static_cast<double>(n + 1) /
                             static_cast<double>(n);
        const double diff = std::abs(est - v_app);
        const double bound = 2.0 / static_cast<double>(n) + slack;
        rep.add_row("t", {t, est, v_app, diff, bound}, diff <= bound);
    }
    return rep;
}

/// Compares the control-side estimate of V_lambda with the bridged
/// v_lambda against the kernel-gap envelope full_gap(lambda) plus slack.
inline ValueReport discount_error_audit(const BridgedProblem& bp,
                                        const std::vector<double>& lambda_grid,
                                        const control::SearchConfig& cfg = {},
                                        double slack = 0.05) {
    if (lambda_grid.empty()) throw domain_error("discount_error_audit: empty lambda grid");
    ValueReport rep("discount_error_audit",
                    {"lambda", "V_lambda_estimate", "v_lambda_bridged", "diff", "bound"});
    rep.add_meta("nodes", static_cast<double>(bp.graph.size()));
    rep.add_meta("quant", bp.quant);
    rep.add_meta("slack", slack);
    for (double lam : lambda_grid) {
        if (!(lam > 0.0 && lam < 1.0))
            throw domain_error("discount_error_audit: lambda must lie in (0,1)");
        const double est = control::estimate_Vlambda(bp.base, bp.x0, lam, cfg).value;
        discrete::ValueTable vl = discrete::value_lambda(bp.graph, lam, 1e-8);
        const double v_app = vl.values[bp.start_index] / (1.0 - lam);
        const double diff = std::abs(est - v_app);
        const double bound = full_gap(lam) + slack;
        rep.add_row("lambda", {lam, est, v_app, diff, bound}, diff <= bound);
    }
    return rep;
}

/// The standard bridging family for double-integrator style instances: rest
/// (u = 0), full thrust (u = 1), and one-switch accelerate-then-coast
/// schedules with the given switch times.
inline std::vector<control::ControlSchedule> standard_unit_family(
    const std::vector<double>& switch_times) {
    std::vector<control::ControlSchedule> fam;
    fam.push_back(control::ControlSchedule::constant(0.0));
    fam.push_back(control::ControlSchedule::constant(1.0));
    for (double tau : switch_times) {
        if (!(tau > 0.0 && tau < 1.0))
            throw domain_error("standard_unit_family: switch times must lie in (0,1)");
        fam.push_back(control::ControlSchedule::one_switch(tau, 1.0, 0.0));
    }
    return fam;
}

}  // namespace tauberian::bridge
