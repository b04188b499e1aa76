#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/report.hpp"

namespace tauberian::discrete {

// ---------------------------------------------------------------------------
// Finite correspondence with node costs.
// ---------------------------------------------------------------------------

/// Finite state set with a nonempty successor correspondence and a cost in
/// [0,1] per state.  Successor lists are kept sorted by state index so that
/// argmin ties resolve to the lowest identifier.
struct DiscreteProblem {
    std::vector<long long> ids;                   // ascending, unique
    std::vector<double> cost;                     // per state
    std::vector<std::vector<std::size_t>> succ;   // indices into ids, sorted

    std::size_t size() const { return ids.size(); }

    std::size_t index_of(long long id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id)
            throw domain_error("DiscreteProblem: unknown state id");
        return static_cast<std::size_t>(it - ids.begin());
    }

    void validate() const {
        if (ids.empty()) throw domain_error("DiscreteProblem: empty state set");
        if (cost.size() != ids.size() || succ.size() != ids.size())
            throw domain_error("DiscreteProblem: field sizes disagree");
        for (std::size_t i = 1; i < ids.size(); ++i)
            if (!(ids[i] > ids[i - 1]))
                throw domain_error("DiscreteProblem: ids must be ascending and unique");
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (cost[i] < -1e-12 || cost[i] > 1.0 + 1e-12)
                throw domain_error("DiscreteProblem: cost outside [0,1]");
            if (succ[i].empty())
                throw domain_error("DiscreteProblem: state without successor");
            for (std::size_t y : succ[i])
                if (y >= ids.size())
                    throw domain_error("DiscreteProblem: successor index out of range");
        }
    }

    void normalize_successors() {
        for (auto& list : succ) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }

    /// Text format: one line per state, `id cost succ1 succ2 ...`, comments
    /// from `#` to end of line.
    static DiscreteProblem parse(std::istream& is) {
        std::vector<long long> raw_ids;
        std::vector<double> raw_cost;
        std::vector<std::vector<long long>> raw_succ;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            long long id;
            if (!(ls >> id)) continue;  // blank or comment-only line
            double c;
            if (!(ls >> c))
                throw domain_error("DiscreteProblem: missing cost on line " +
                                   std::to_string(lineno));
            std::vector<long long> ss;
            long long y;
            while (ls >> y) ss.push_back(y);
            if (ss.empty())
                throw domain_error("DiscreteProblem: state without successor on line " +
                                   std::to_string(lineno));
            raw_ids.push_back(id);
            raw_cost.push_back(c);
            raw_succ.push_back(std::move(ss));
        }

        // Sort states by id, then resolve successor ids to indices.
        std::vector<std::size_t> order(raw_ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return raw_ids[a] < raw_ids[b]; });

        DiscreteProblem p;
        p.ids.reserve(order.size());
        p.cost.reserve(order.size());
        p.succ.resize(order.size());
        for (std::size_t i : order) {
            p.ids.push_back(raw_ids[i]);
            p.cost.push_back(raw_cost[i]);
        }
        for (std::size_t k = 0; k < order.size(); ++k) {
            for (long long y : raw_succ[order[k]]) p.succ[k].push_back(p.index_of(y));
        }
        p.normalize_successors();
        p.validate();
        return p;
    }

    static DiscreteProblem parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw domain_error("DiscreteProblem: cannot open " + path);
        return parse(is);
    }

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < size(); ++i) {
            os << ids[i] << " " << format_double(cost[i]);
            for (std::size_t y : succ[i]) os << " " << ids[y];
            os << "\n";
        }
    }

    void write_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("DiscreteProblem: cannot open " + path);
        write(os);
    }
};

/// Values of one evaluation (horizon n or discount lambda) with the argmin
/// successor per state.
struct ValueTable {
    double parameter;
    std::vector<double> values;
    std::vector<std::size_t> witness;  // successor index attaining the minimum
};

namespace detail_dp {

inline std::size_t argmin_succ(const DiscreteProblem& p, std::size_t z,
                               const std::vector<double>& v) {
    std::size_t best = p.succ[z].front();
    for (std::size_t y : p.succ[z])
        if (v[y] < v[best]) best = y;  // sorted lists: first hit is lowest id
    return best;
}

}  // namespace detail_dp

// ---------------------------------------------------------------------------
// Exact finite-horizon values: S_1(z) = g(z), S_k(z) = g(z) + min S_{k-1},
// v_n = S_n / n.  The play starts at z and g(z) is the first counted cost.
// ---------------------------------------------------------------------------

inline ValueTable value_n(const DiscreteProblem& p, std::size_t n) {
    if (n < 1) throw domain_error("value_n: n must be >= 1");
    const std::size_t m = p.size();
    ValueTable t;
    t.parameter = static_cast<double>(n);
    t.witness.resize(m);

    std::vector<double> prev = p.cost;  // S_1
    std::vector<double> cur(m);
    for (std::size_t k = 2; k <= n; ++k) {
        for (std::size_t z = 0; z < m; ++z) {
            double best = prev[p.succ[z].front()];
            for (std::size_t y : p.succ[z]) best = std::min(best, prev[y]);
            cur[z] = p.cost[z] + best;
        }
        if (k == n)  // first move of an optimal n-play: argmin of S_{n-1}
            for (std::size_t z = 0; z < m; ++z)
                t.witness[z] = detail_dp::argmin_succ(p, z, prev);
        std::swap(prev, cur);
    }
    if (n == 1)  // no move inside the horizon; report the one-step lookahead
        for (std::size_t z = 0; z < m; ++z)
            t.witness[z] = detail_dp::argmin_succ(p, z, p.cost);

    t.values.resize(m);
    for (std::size_t z = 0; z < m; ++z) t.values[z] = prev[z] / static_cast<double>(n);
    return t;
}

// ---------------------------------------------------------------------------
// Discounted values by contraction iteration on
// v(z) = lambda g(z) + (1-lambda) min over successors of v.
// ---------------------------------------------------------------------------

inline ValueTable value_lambda(const DiscreteProblem& p, double lambda, double tol = 1e-10) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw domain_error("value_lambda: lambda must lie in (0,1)");
    if (!(tol > 0.0)) throw domain_error("value_lambda: tol must be positive");
    const std::size_t m = p.size();
    const double q = 1.0 - lambda;
    // sup-norm change <= tol*lambda/(1-lambda) bounds the fixed-point error
    // by tol (contraction modulus 1-lambda).
    const double stop = tol * lambda / q;
    // From delta_0 <= 1 and delta_k <= q^k: iterations needed is bounded.
    const auto max_iter =
        static_cast<std::size_t>(std::ceil(std::log(std::max(stop, 1e-300)) / std::log(q))) + 16;

    std::vector<double> v = p.cost;
    std::vector<double> nxt(m);
    for (std::size_t it = 0; it < max_iter; ++it) {
        double delta = 0.0;
        for (std::size_t z = 0; z < m; ++z) {
            double best = v[p.succ[z].front()];
            for (std::size_t y : p.succ[z]) best = std::min(best, v[y]);
            nxt[z] = lambda * p.cost[z] + q * best;
            delta = std::max(delta, std::abs(nxt[z] - v[z]));
        }
        std::swap(v, nxt);
        if (delta <= stop) break;
    }
    ValueTable t;
    t.parameter = lambda;
    t.values = v;
    t.witness.resize(m);
    for (std::size_t z = 0; z < m; ++z) t.witness[z] = detail_dp::argmin_succ(p, z, v);
    return t;
}

/// sup_z |v(z) - lambda g(z) - (1-lambda) min_succ v|; certifies a ValueTable.
inline double fixed_point_residual(const DiscreteProblem& p, double lambda,
                                   const ValueTable& t) {
    double r = 0.0;
    for (std::size_t z = 0; z < p.size(); ++z) {
        double best = t.values[p.succ[z].front()];
        for (std::size_t y : p.succ[z]) best = std::min(best, t.values[y]);
        r = std::max(r, std::abs(t.values[z] - lambda * p.cost[z] - (1.0 - lambda) * best));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Minimum mean cycle (Karp) on the subgraph reachable from z, with edge
// weight w(u -> y) = cost(u) so cycle edge means equal cycle node means.
// ---------------------------------------------------------------------------

inline double min_mean_cycle(const DiscreteProblem& p, std::size_t z) {
    if (z >= p.size()) throw domain_error("min_mean_cycle: state index out of range");
    // Reachable set, in deterministic BFS order.
    std::vector<std::size_t> reach;
    std::vector<std::size_t> local(p.size(), SIZE_MAX);
    reach.push_back(z);
    local[z] = 0;
    for (std::size_t head = 0; head < reach.size(); ++head) {
        for (std::size_t y : p.succ[reach[head]]) {
            if (local[y] == SIZE_MAX) {
                local[y] = reach.size();
                reach.push_back(y);
            }
        }
    }
    const std::size_t m = reach.size();
    if (m > 4000)
        throw capacity_error("min_mean_cycle: reachable set too large for the Karp table", m);

    const double inf = std::numeric_limits<double>::infinity();
    // D[k][v] = min cost of a k-edge walk z -> v inside the reachable set.
    std::vector<std::vector<double>> D(m + 1, std::vector<double>(m, inf));
    D[0][0] = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        for (std::size_t vi = 0; vi < m; ++vi) {
            if (D[k - 1][vi] == inf) continue;
            const std::size_t u = reach[vi];
            const double base = D[k - 1][vi] + p.cost[u];
            for (std::size_t y : p.succ[u]) {
                const std::size_t yi = local[y];
                if (base < D[k][yi]) D[k][yi] = base;
            }
        }
    }
    double mu = inf;
    for (std::size_t vi = 0; vi < m; ++vi) {
        if (D[m][vi] == inf) continue;
        double worst = -inf;
        for (std::size_t k = 0; k < m; ++k) {
            if (D[k][vi] == inf) continue;
            worst = std::max(worst, (D[m][vi] - D[k][vi]) / static_cast<double>(m - k));
        }
        mu = std::min(mu, worst);
    }
    return mu;
}

// ---------------------------------------------------------------------------
// Experiments.
// ---------------------------------------------------------------------------

/// Checks limit monotonicity along v_n-optimal moves: the min-mean-cycle
/// value can only grow from a state to its chosen successor (the successor's
/// reachable cycles are a subset).  v_n and v_lambda columns at the same pair
/// are reported as liminf proxies.
inline ValueReport monotonicity_audit(const DiscreteProblem& p, std::size_t n_max,
                                      const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) throw domain_error("monotonicity_audit: empty lambda grid");
    ValueTable vt = value_n(p, n_max);
    const double lam = *std::min_element(lambda_grid.begin(), lambda_grid.end());
    ValueTable vl = value_lambda(p, lam, 1e-10);

    ValueReport rep("monotonicity_audit",
                    {"state", "mmc_z", "mmc_succ", "v_n_z", "v_n_succ", "v_lambda_z",
                     "v_lambda_succ"});
    rep.add_meta("n_max", static_cast<double>(n_max));
    rep.add_meta("lambda", lam);
    for (std::size_t z = 0; z < p.size(); ++z) {
        const std::size_t y = vt.witness[z];
        const double mz = min_mean_cycle(p, z);
        const double my = min_mean_cycle(p, y);
        const bool ok = mz <= my + 1e-12;
        rep.add_row("state",
                    {static_cast<double>(p.ids[z]), mz, my, vt.values[z], vt.values[y],
                     vl.values[z], vl.values[y]},
                    ok);
    }
    return rep;
}

/// Tabulates sup-norm gaps between v_n, v_{1/n} and the min-mean-cycle limit
/// over an ascending n grid; on a finite graph all three columns tend to 0.
/// Pass flags: the v_n gap is checked against the 2*|states|/n envelope at
/// every n; the v_n vs v_{1/n} gap against 0.02 once n >= 10^4 (rows below
/// that horizon carry no flag, the bound is only claimed in the limit).
inline ValueReport tauberian_gap(const DiscreteProblem& p,
                                 const std::vector<std::size_t>& n_grid) {
    if (n_grid.empty()) throw domain_error("tauberian_gap: empty n grid");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()))
        throw domain_error("tauberian_gap: n_grid must be ascending");

    std::vector<double> mmc(p.size());
    for (std::size_t z = 0; z < p.size(); ++z) mmc[z] = min_mean_cycle(p, z);

    ValueReport rep("tauberian_gap",
                    {"n", "sup_vn_minus_mmc", "sup_vlambda_minus_mmc", "sup_vn_minus_vlambda"});
    rep.add_meta("states", static_cast<double>(p.size()));
    const double envelope_scale = 2.0 * static_cast<double>(p.size());
    for (std::size_t n : n_grid) {
        ValueTable vn = value_n(p, n);
        ValueTable vl = value_lambda(p, 1.0 / static_cast<double>(n), 1e-10);
        double g1 = 0.0, g2 = 0.0, g3 = 0.0;
        for (std::size_t z = 0; z < p.size(); ++z) {
            g1 = std::max(g1, std::abs(vn.values[z] - mmc[z]));
            g2 = std::max(g2, std::abs(vl.values[z] - mmc[z]));
            g3 = std::max(g3, std::abs(vn.values[z] - vl.values[z]));
        }
        const double envelope = envelope_scale / static_cast<double>(n);
        bool ok = g1 <= envelope + 1e-9;
        if (n >= 10000) ok = ok && g3 <= 0.02;
        rep.add_row("gap", {static_cast<double>(n), g1, g2, g3}, ok);
    }
    return rep;
}

}  // namespace tauberian::discrete
