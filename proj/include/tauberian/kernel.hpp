#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "tauberian/common.hpp"
#include "tauberian/plays.hpp"

namespace tauberian::kernel {

/// Density of the averaging kernel at discount rate lambda:
/// mu_lambda(s) = lambda^2 s e^{-lambda s}.
struct KernelMass {
    explicit KernelMass(double lambda_) : lambda(lambda_) {
        if (!(lambda > 0.0)) throw domain_error("KernelMass: lambda must be positive");
    }
    double lambda;
};

inline double mu_density(const KernelMass& k, double s) {
    if (s < 0.0) throw domain_error("mu_density: s must be nonnegative");
    return k.lambda * k.lambda * s * std::exp(-k.lambda * s);
}

/// Closed-form kernel mass of [alpha, beta]:
/// M = e^{-la}(1 + la) - e^{-lb}(1 + lb) with l = lambda.  beta may be +inf.
inline double mass(const KernelMass& k, double alpha, double beta) {
    if (alpha < 0.0) throw domain_error("mass: alpha must be nonnegative");
    if (!(beta >= alpha)) throw domain_error("mass: beta must be >= alpha");
    auto antiderivative = [&](double s) {
        if (std::isinf(s)) return 0.0;
        double ls = k.lambda * s;
        return std::exp(-ls) * (1.0 + ls);
    };
    return antiderivative(alpha) - antiderivative(beta);
}

/// Mass the kernel places beyond s_max; bounds what a truncated integral drops.
inline double tail_mass(const KernelMass& k, double s_max) {
    return mass(k, s_max, std::numeric_limits<double>::infinity());
}

struct MarginResult {
    double mass_value;
    double bound;
    bool pass;
};

/// Mass of the trailing window [(1-eps)t, t] at lambda = 1/t, compared with
/// the window bound eps/(2e).  The mass reduces to (2-eps)e^{eps-1} - 2/e,
/// free of t; computing through t exhibits that invariance numerically.
inline MarginResult lemma_i_margin(double t, double eps) {
    if (!(t > 0.0)) throw domain_error("lemma_i_margin: t must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("lemma_i_margin: eps must lie in (0,1)");
    KernelMass k(1.0 / t);
    double m = mass(k, (1.0 - eps) * t, t);
    double bound = eps / (2.0 * std::exp(1.0));
    return {m, bound, m >= bound};
}

/// Mass of the bulk window [eps t, (1-eps) t] at lambda = 1/(t sqrt(eps)),
/// compared with 1-delta.  Also t-free: it reduces to
/// (1+r)e^{-r} - (1+w)e^{-w} with r = sqrt(eps) and w = 1/r - r.
inline MarginResult lemma_ii_margin(double t, double eps, double delta) {
    if (!(t > 0.0)) throw domain_error("lemma_ii_margin: t must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("lemma_ii_margin: eps must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw domain_error("lemma_ii_margin: delta must lie in (0,1)");
    KernelMass k(1.0 / (t * std::sqrt(eps)));
    double m = mass(k, eps * t, (1.0 - eps) * t);
    double bound = 1.0 - delta;
    return {m, bound, m >= bound};
}

/// Largest eps in (0, eps_cap] at which lemma_i_margin still passes, located
/// by bisection.  The margin inequality holds on all of (0,1), so with the
/// default cap this simply returns eps_cap; the search is kept for probing
/// modified bounds.
inline double lemma_i_threshold(double eps_cap = 0.5, double tol = 1e-9) {
    if (!(eps_cap > 0.0 && eps_cap < 1.0))
        throw domain_error("lemma_i_threshold: eps_cap must lie in (0,1)");
    auto pass = [](double e) { return lemma_i_margin(1.0, e).pass; };
    if (pass(eps_cap)) return eps_cap;
    double lo = std::min(1e-9, 0.5 * eps_cap);
    if (!pass(lo)) return 0.0;
    double hi = eps_cap;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (pass(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Residual of the convexity identity
///   lambda int_0^T e^{-lambda s} g ds
///     = int_0^T gamma_s(X) mu_lambda(s) ds + lambda T e^{-lambda T} gamma_T(X)
/// evaluated by trapezoid on the trajectory's grid over [0, T], T = s_max
/// snapped to the grid.  The identity is exact in the continuum, so the
/// residual is pure quadrature error, O(h^2).
inline double convexity_residual(const plays::Trajectory& x, double lambda, double s_max) {
    if (!(lambda > 0.0)) throw domain_error("convexity_residual: lambda must be positive");
    if (!(s_max > 0.0)) throw domain_error("convexity_residual: s_max must be positive");
    if (s_max > x.horizon() * (1.0 + 1e-12))
        throw insufficient_data_error("convexity_residual: s_max exceeds trajectory horizon");
    if (x.size() < 2) throw insufficient_data_error("convexity_residual: need two samples");

    const double h = x.step();
    auto kmax = static_cast<std::size_t>(std::floor(s_max / h + 1e-9));
    if (kmax > x.size() - 1) kmax = x.size() - 1;
    if (kmax < 1) throw insufficient_data_error("convexity_residual: s_max below one step");
    const double T = h * static_cast<double>(kmax);

    const auto& g = x.costs();
    auto prefix = detail::trapezoid_prefix(g, h);
    KernelMass k(lambda);

    std::vector<double> lhs_integrand(kmax + 1), rhs_integrand(kmax + 1);
    for (std::size_t i = 0; i <= kmax; ++i) {
        double s = h * static_cast<double>(i);
        double gamma_s = i == 0 ? g[0] : prefix[i] / s;
        lhs_integrand[i] = lambda * std::exp(-lambda * s) * g[i];
        rhs_integrand[i] = gamma_s * mu_density(k, s);
    }
    double lhs = detail::trapezoid_integral(lhs_integrand, h, T);
    double rhs = detail::trapezoid_integral(rhs_integrand, h, T);
    double gamma_T = prefix[kmax] / T;
    double tail_term = lambda * T * std::exp(-lambda * T) * gamma_T;
    return std::abs(lhs - rhs - tail_term);
}

}  // namespace tauberian::kernel
