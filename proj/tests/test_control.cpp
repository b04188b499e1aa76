#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tauberian/control.hpp"

using namespace tauberian;
using Catch::Approx;

namespace {
const control::ControlProblem& band() {
    static const control::ControlProblem p = control::counterexample();
    return p;
}
const control::State kOrigin{0.0, 0.0};
}  // namespace

TEST_CASE("schedule construction and lookup") {
    auto s = control::ControlSchedule::one_switch(0.5, 1.0, 0.0);
    CHECK(s.at(0.0) == 1.0);
    CHECK(s.at(0.49) == 1.0);
    CHECK(s.at(0.5) == 0.0);  // right-continuous
    CHECK(s.at(100.0) == 0.0);
    CHECK_THROWS_AS(control::ControlSchedule::from_pieces({0.0, 1.0, 1.0}, {0, 1, 0}),
                    domain_error);
    CHECK_THROWS_AS(control::ControlSchedule::from_pieces({0.5}, {1.0}), domain_error);
    CHECK_THROWS_AS(control::ControlSchedule::one_switch(0.0, 1, 0), domain_error);

    auto merged = control::ControlSchedule::from_pieces({0.0, 1.0, 2.0}, {1.0, 1.0, 0.0});
    CHECK(merged.canonical() == control::ControlSchedule::one_switch(2.0, 1.0, 0.0));
}

TEST_CASE("integrator matches the double integrator closed form") {
    auto s = control::ControlSchedule::constant(1.0);
    auto x = control::simulate(band(), kOrigin, s, 2.0, 0.01);
    auto last = x.state(x.size() - 1);
    CHECK(last[0] == Approx(2.0).margin(1e-9));
    CHECK(last[1] == Approx(2.0).margin(1e-9));
    // position 1/2 s^2 crosses 1 at sqrt(2): sampled payoff approx sqrt(2)/2
    CHECK(plays::gamma_t(x, 2.0) == Approx(std::sqrt(2.0) / 2.0).margin(0.02));
}

TEST_CASE("closed form crossings and payoffs") {
    auto s = control::ControlSchedule::one_switch(0.5, 1.0, 0.0);
    auto c = band().crossings(kOrigin, s);
    CHECK(c.enter == Approx(oracles::kT1Tau05).margin(1e-12));
    CHECK(c.exit == Approx(oracles::kT2Tau05).margin(1e-12));

    CHECK(control::crossing_gamma_t(c, 10.0) ==
          Approx((oracles::kT1Tau05 + 10.0 - oracles::kT2Tau05) / 10.0).margin(1e-12));
    CHECK(control::crossing_gamma_t(c, 3.0) ==
          Approx(oracles::kT1Tau05 / 3.0).margin(1e-12));
    CHECK(control::crossing_gamma_lambda(c, 0.1) ==
          Approx(1.0 - std::exp(-0.225) + std::exp(-0.425)).margin(1e-12));

    // never entering the band: cost 1 throughout
    auto rest = control::ControlSchedule::constant(0.0);
    auto c0 = band().crossings(kOrigin, rest);
    CHECK(std::isinf(c0.enter));
    CHECK(control::crossing_gamma_t(c0, 5.0) == 1.0);
    CHECK(control::crossing_gamma_lambda(c0, 0.3) == 1.0);
}

TEST_CASE("exact and quadrature payoffs agree on random schedules") {
    std::mt19937_64 rng(5);
    control::SearchConfig cfg;
    const double t = 25.0, lambda = 0.2, slack = 10.0 * cfg.h;
    for (int i = 0; i < 20; ++i) {
        auto s = control::random_schedule(rng, t, 6, 0.0, 1.0);
        const auto c = band().crossings(kOrigin, s);
        const double horizon = std::max(t, std::log(1e6) / lambda + 1.0);
        auto x = control::simulate(band(), kOrigin, s, horizon, cfg.h);
        CHECK(plays::gamma_t(x, t) ==
              Approx(control::crossing_gamma_t(c, t)).margin(slack));
        CHECK(plays::gamma_lambda(x, lambda) ==
              Approx(control::crossing_gamma_lambda(c, lambda)).margin(slack));
    }
}

TEST_CASE("value estimates land in the proven windows") {
    control::SearchConfig cfg;
    auto vt = control::estimate_Vt(band(), kOrigin, 100.0, cfg);
    CHECK(vt.value >= 0.5);
    CHECK(vt.value <= 0.5001);
    CHECK_FALSE(vt.budget_exhausted);

    auto vl = control::estimate_Vlambda(band(), kOrigin, 0.1, cfg);
    CHECK(vl.value == Approx(oracles::kVlambda01).margin(1e-9));

    // the witness reproduces the reported payoff
    CHECK(control::schedule_gamma_t(band(), kOrigin, vt.witness, 100.0, cfg) ==
          Approx(vt.value).margin(1e-12));
}

TEST_CASE("pattern budget is reported") {
    control::SearchConfig cfg;
    cfg.max_patterns = 2;
    auto e = control::estimate_Vt(band(), kOrigin, 10.0, cfg);
    CHECK(e.budget_exhausted);
}

TEST_CASE("analytic limit tables") {
    CHECK(control::analytic_V(0.0, 0.0) == 0.5);
    CHECK(control::analytic_V(0.5, 0.0) == Approx(1.0 / 3.0).margin(1e-15));
    CHECK(control::analytic_V(1.5, 0.0) == 0.0);
    CHECK(control::analytic_V(2.0, 0.0) == 0.0);
    CHECK(control::analytic_V(2.5, 0.0) == 1.0);
    CHECK(control::analytic_V(0.0, 0.3) == 1.0);

    CHECK(control::analytic_W(0.0, 0.0) == 0.75);
    CHECK(control::analytic_W(0.5, 0.0) == Approx(oracles::kW05).margin(1e-15));
    CHECK(control::analytic_W(1.5, 0.0) == 0.0);
    CHECK(control::analytic_W(2.5, 0.0) == 1.0);
    CHECK(control::analytic_W(0.0, 0.1) == 1.0);
}

TEST_CASE("first reach and exceed") {
    auto thrust = control::ControlSchedule::constant(1.0);
    CHECK(control::detail_ce::first_reach(0.0, 0.0, thrust, 1.0) ==
          Approx(std::sqrt(2.0)).margin(1e-12));
    CHECK(control::detail_ce::first_exceed(0.0, 0.0, thrust, 1.0) ==
          Approx(std::sqrt(2.0)).margin(1e-12));

    auto rest = control::ControlSchedule::constant(0.0);
    CHECK(control::detail_ce::first_reach(1.0, 0.0, rest, 1.0) == 0.0);
    CHECK(std::isinf(control::detail_ce::first_exceed(1.0, 0.0, rest, 1.0)));
    // drifting at speed 1/2 from 0: reaches 1 at 2
    CHECK(control::detail_ce::first_reach(0.0, 0.5, rest, 1.0) == Approx(2.0).margin(1e-12));
}

TEST_CASE("value cannot drop along a played trajectory") {
    control::SearchConfig cfg;
    const double t = 50.0;
    const double base = control::estimate_Vt(band(), kOrigin, t, cfg).value;
    auto w = control::ControlSchedule::one_switch(2.0 / t, 1.0, 0.0);
    auto x = control::simulate(band(), kOrigin, w, 5.0, 0.01);
    auto xs = x.state(x.size() - 1);
    const double later = control::estimate_Vt(band(), {xs[0], xs[1]}, t, cfg).value;
    CHECK(later >= base - 0.02);
}

TEST_CASE("two nearby starts with far apart values") {
    control::SearchConfig cfg;
    CHECK(control::estimate_Vt(band(), {1.0, 0.0}, 1000.0, cfg).value <= 1e-9);
    CHECK(control::estimate_Vt(band(), {1.0, 0.01}, 1000.0, cfg).value >= 0.85);
}

TEST_CASE("smooth variant: invariants and windows") {
    const auto p = control::smooth_variant();
    // leaving the admissible cone is reported with the violation time
    auto s = control::ControlSchedule::constant(0.0);
    CHECK_THROWS_AS(control::simulate(p, {0.0, 1.0}, s, 1.0, 0.01),
                    feasibility_error);

    // forward invariance from an admissible interior state
    auto x = control::simulate(p, {2.0, 1.0}, control::ControlSchedule::constant(1.0), 10.0,
                               0.01);
    CHECK(x.size() == 1001);

    auto audit = control::invariance_audit(
        p,
        [](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> xd(0.2, 3.8), ud(0.0, 0.95);
            const double xx = xd(rng);
            return control::State{xx, ud(rng) * std::min(std::sqrt(2.0 * xx), 2.0 * std::sqrt(2.0))};
        },
        50, 10.0, 0.01, 7);
    CHECK(audit.all_pass());
}

TEST_CASE("random lower bound audit holds the proven floors") {
    auto rep = control::lower_bound_audit(50, 30.0, 0.05, 7);
    CHECK(rep.all_pass());
    CHECK(rep.rows().size() == 51);
}

TEST_CASE("schedules must respect the control range") {
    auto bad = control::ControlSchedule::constant(2.0);
    CHECK_THROWS_AS(control::simulate(band(), kOrigin, bad, 1.0, 0.01), domain_error);
    CHECK_THROWS_AS(control::simulate(band(), {0.0}, control::ControlSchedule::constant(0.5),
                                      1.0, 0.01),
                    domain_error);
}
