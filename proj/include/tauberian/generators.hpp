#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/discrete.hpp"
#include "tauberian/plays.hpp"

namespace tauberian::gen {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

/// State-free trajectory whose cost is piecewise constant with values in
/// [0,1] and breakpoints aligned to the sampling grid.  Handy for exercising
/// means and kernel quadrature against closed forms.
inline plays::Trajectory random_cost_trajectory(std::mt19937_64& rng, double horizon, double h,
                                                int max_pieces = 12) {
    if (!(horizon > 0.0) || !(h > 0.0)) throw domain_error("random_cost_trajectory: bad grid");
    if (max_pieces < 1) throw domain_error("random_cost_trajectory: max_pieces must be >= 1");
    const auto n = static_cast<std::size_t>(std::llround(horizon / h));
    if (n == 0) throw domain_error("random_cost_trajectory: horizon shorter than one step");

    std::uniform_int_distribution<int> pieces_dist(1, max_pieces);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int pieces = pieces_dist(rng);

    std::vector<std::size_t> cuts{0, n};
    std::uniform_int_distribution<std::size_t> cut_dist(1, n - 1);
    for (int i = 1; i < pieces; ++i) cuts.push_back(cut_dist(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> level(cuts.size() - 1);
    for (auto& v : level) v = unit(rng);

    plays::Trajectory traj(0, h);
    std::size_t piece = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        while (piece + 1 < level.size() && k >= cuts[piece + 1]) ++piece;
        traj.append({}, level[piece]);
    }
    return traj;
}

/// Random successor graph: every node keeps at least one outgoing edge, so
/// all plays are infinite.  Costs are uniform on [0,1].
inline discrete::DiscreteProblem random_graph(std::mt19937_64& rng, std::size_t n_states,
                                              std::size_t max_out) {
    if (n_states == 0) throw domain_error("random_graph: need at least one state");
    if (max_out == 0) throw domain_error("random_graph: need at least one edge per state");
    max_out = std::min(max_out, n_states);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> degree(1, max_out);
    std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);

    discrete::DiscreteProblem p;
    p.ids.resize(n_states);
    p.cost.resize(n_states);
    p.succ.resize(n_states);
    for (std::size_t i = 0; i < n_states; ++i) {
        p.ids[i] = static_cast<long long>(i);
        p.cost[i] = unit(rng);
        const std::size_t d = degree(rng);
        auto& out = p.succ[i];
        while (out.size() < d) {
            const std::size_t j = pick(rng);
            if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
        }
    }
    p.normalize_successors();
    p.validate();
    return p;
}

}  // namespace tauberian::gen
