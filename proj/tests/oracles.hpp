#pragma once

// Frozen reference values and brute-force engines used to validate the
// library's fast paths.  Constants were derived independently (closed forms
// evaluated by hand or kink-split Simpson integration at high resolution);
// the brute engines share no code with the implementations under test.

#include <cstddef>
#include <vector>

#include "tauberian/discrete.hpp"

namespace oracles {

// Abel mean of 1,0,1,0,... equals 1/(2-lambda).
inline constexpr double kAbelAlternatingHalf = 2.0 / 3.0;           // lambda = 1/2
inline constexpr double kAbelAlternatingTenth = 0.5263157894736842;  // lambda = 1/10

// integral of e^{-s} over [0,1]
inline constexpr double kTimeAvgExpOne = 0.6321205588285577;
// lambda=0.1 discounted mass of the indicator of [0,7]: 1 - e^{-0.7}
inline constexpr double kDiscountedIndicator7 = 0.5034146962085905;
// lambda=0.1 discounted mean of the unit square wave with period 2:
// (1-e^{-0.1})/(1-e^{-0.2})
inline constexpr double kDiscountedSquareWave = 0.5249791874789399;

// kernel density and mass closed forms at lambda = 1
inline constexpr double kMuDensity11 = 0.36787944117144233;  // 1*e^{-1}
inline constexpr double kMass1_12 = 0.3297530326330468;      // 2e^{-1} - 3e^{-2}

// first localization margin at eps = 0.1 (any t): (2-eps)e^{eps-1} - 2e^{-1}
inline constexpr double kLemmaIMass01 = 0.03672347116425364;
inline constexpr double kLemmaIBound01 = 0.018393972058572117;  // eps/(2e)

// second localization mass at eps = 0.01 (any t)
inline constexpr double kLemmaIIMass001 = 0.99477425580514287;

// counterexample limits: V(0.5,0) = 1/3, W(0.5,0) = 1 - 0.5^0.5 / 1.5^1.5
inline constexpr double kW05 = 0.6150998205402495;

// one-switch crossing times from (0,0) with switch at tau = 1/2:
// t1 = 1/tau + tau/2, t2 = 2/tau + tau/2
inline constexpr double kT1Tau05 = 2.25;
inline constexpr double kT2Tau05 = 4.25;

// discounted value of the best one-switch play from (0,0)
inline constexpr double kVlambda01 = 0.7517902248296149;  // lambda = 0.1

// E(lambda) = lambda * integral of [(1-lambda)^{floor t} - e^{-lambda t}]_+
inline constexpr double kE05 = 0.12939308047255918;
inline constexpr double kE01 = 0.022259331337552625;
inline constexpr double kE001 = 0.002167772387591365;
inline constexpr double kE0001 = 0.00021622698929894143;

// ---------------------------------------------------------------------------
// Exhaustive engines for small graphs.
// ---------------------------------------------------------------------------

// min over all plays of length n (first stage cost counted) of the average.
inline double brute_value_n(const tauberian::discrete::DiscreteProblem& p, std::size_t z,
                            std::size_t n) {
    struct Rec {
        const tauberian::discrete::DiscreteProblem& p;
        double run(std::size_t at, std::size_t left) const {
            const double g = p.cost[at];
            if (left == 1) return g;
            double best = 2.0 * static_cast<double>(left);
            for (std::size_t y : p.succ[at]) best = std::min(best, run(y, left - 1));
            return g + best;
        }
    } rec{p};
    return rec.run(z, n) / static_cast<double>(n);
}

// min over stationary policies, each evaluated by exact geometric summation
// along its eventually-periodic play.
inline double brute_value_lambda(const tauberian::discrete::DiscreteProblem& p, std::size_t z,
                                 double lambda) {
    const std::size_t m = p.size();
    std::vector<std::size_t> choice(m, 0);
    const double q = 1.0 - lambda;
    double best = 2.0;
    for (;;) {
        // walk until a state repeats
        std::vector<std::size_t> order;
        std::vector<long> seen(m, -1);
        std::size_t at = z;
        while (seen[at] < 0) {
            seen[at] = static_cast<long>(order.size());
            order.push_back(at);
            at = p.succ[at][choice[at]];
        }
        const auto cycle_start = static_cast<std::size_t>(seen[at]);
        double v = 0.0, w = 1.0;
        for (std::size_t i = 0; i < cycle_start; ++i, w *= q) v += lambda * w * p.cost[order[i]];
        double cyc = 0.0, wc = 1.0;
        for (std::size_t i = cycle_start; i < order.size(); ++i, wc *= q)
            cyc += lambda * wc * p.cost[order[i]];
        v += w * cyc / (1.0 - wc);  // wc = q^len after the loop
        best = std::min(best, v);

        std::size_t d = m;
        while (d > 0 && ++choice[d - 1] == p.succ[d - 1].size()) choice[--d] = 0;
        if (d == 0) break;
    }
    return best;
}

// enumerate simple cycles (rooted at their smallest reachable index).
inline double brute_min_mean_cycle(const tauberian::discrete::DiscreteProblem& p,
                                   std::size_t z) {
    const std::size_t m = p.size();
    std::vector<bool> reach(m, false);
    std::vector<std::size_t> stack{z};
    reach[z] = true;
    while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t y : p.succ[a])
            if (!reach[y]) {
                reach[y] = true;
                stack.push_back(y);
            }
    }

    double best = 2.0;
    std::vector<bool> on_path(m, false);
    struct Rec {
        const tauberian::discrete::DiscreteProblem& p;
        std::vector<bool>& on_path;
        std::size_t root;
        double* best;
        void run(std::size_t at, double sum, std::size_t len) {
            for (std::size_t y : p.succ[at]) {
                if (y == root) {
                    *best = std::min(*best, sum / static_cast<double>(len));
                } else if (y > root && !on_path[y]) {
                    on_path[y] = true;
                    run(y, sum + p.cost[y], len + 1);
                    on_path[y] = false;
                }
            }
        }
    };
    for (std::size_t root = 0; root < m; ++root) {
        if (!reach[root]) continue;
        Rec rec{p, on_path, root, &best};
        on_path[root] = true;
        rec.run(root, p.cost[root], 1);
        on_path[root] = false;
    }
    return best;
}

}  // namespace oracles
