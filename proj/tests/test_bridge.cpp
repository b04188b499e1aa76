#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <sstream>

#include "oracles.hpp"
#include "tauberian/bridge.hpp"
#include "tauberian/experiments.hpp"

using namespace tauberian;
using Catch::Approx;

TEST_CASE("kernel comparison integral against independent quadrature") {
    CHECK(bridge::kernel_gap(0.5).e_value == Approx(oracles::kE05).margin(1e-12));
    CHECK(bridge::kernel_gap(0.1).e_value == Approx(oracles::kE01).margin(1e-12));
    CHECK(bridge::kernel_gap(0.01).e_value == Approx(oracles::kE001).margin(1e-12));
    CHECK(bridge::kernel_gap(0.001).e_value == Approx(oracles::kE0001).margin(1e-12));
    CHECK(bridge::kernel_gap(0.5).bound == std::expm1(0.5));
}

TEST_CASE("gap properties across the discount range") {
    double prev = 1e9;
    for (double lam : {0.9, 0.5, 0.1, 0.01, 0.001, 1e-5}) {
        auto g = bridge::kernel_gap(lam);
        CHECK(g.pass);
        CHECK(g.e_value > 0.0);
        CHECK(g.e_value < prev);
        prev = g.e_value;
        // equal total masses force the two one-sided parts to agree
        CHECK(bridge::full_gap(lam) == Approx(2.0 * g.e_value).margin(1e-9));
    }
    // closed form for strong discounting: only the k = 0 cell contributes
    CHECK(bridge::kernel_gap(0.9).e_value ==
          Approx(0.9 - 1.0 + std::exp(-0.9)).margin(1e-15));
    // truncation can only shrink the integral
    CHECK(bridge::kernel_gap(0.5, 2.0).e_value <= bridge::kernel_gap(0.5).e_value);
    CHECK(bridge::full_gap(0.5, 0.5) < bridge::full_gap(0.5));

    CHECK_THROWS_AS(bridge::kernel_gap(0.0), domain_error);
    CHECK_THROWS_AS(bridge::kernel_gap(1.0), domain_error);
    CHECK_THROWS_AS(bridge::kernel_gap(0.5, 0.0), domain_error);
    CHECK_THROWS_AS(bridge::full_gap(1.5), domain_error);
}

namespace {

bridge::DiscretizeOptions tiny_opts() {
    bridge::DiscretizeOptions o;
    o.absorb = [](std::span<const double> x) -> std::optional<double> {
        if (x[0] > 2.0 + 2e-3) return 1.0;
        return std::nullopt;
    };
    return o;
}

}  // namespace

TEST_CASE("discretization of the two-action family") {
    const auto p = control::counterexample();
    auto bp = bridge::discretize(p, {0.0, 0.0}, bridge::standard_unit_family({}), tiny_opts());

    CHECK(bp.start_index == 0);
    CHECK(bp.graph.cost[0] == 0.0);  // start carries no accumulated cost
    REQUIRE(bp.rep_state.size() == bp.graph.size());
    CHECK(bp.rep_state[0] == std::vector<double>{0.0, 0.0});

    std::size_t absorbing = 0;
    for (std::size_t z = 0; z < bp.graph.size(); ++z) {
        CHECK(bp.graph.succ[z].size() <= bp.unit_schedules.size());
        if (bp.rep_state[z].empty()) {
            ++absorbing;
            CHECK(bp.graph.succ[z] == std::vector<std::size_t>{z});  // self-loop
        }
    }
    CHECK(absorbing >= 1);
    CHECK(bp.graph.size() < 64);  // rest/thrust closure stays tiny

    // best 8-step play by hand: thrust twice (costs 1 and sqrt(2)-1), then
    // absorbed at cost 1; the start itself is free
    auto vt = discrete::value_n(bp.graph, 8);
    CHECK(vt.values[0] == Approx((std::sqrt(2.0) + 5.0) / 8.0).margin(2e-6));

    // byte determinism of the construction
    auto bp2 = bridge::discretize(p, {0.0, 0.0}, bridge::standard_unit_family({}), tiny_opts());
    std::ostringstream a, b;
    bp.graph.write(a);
    bp2.graph.write(b);
    CHECK(a.str() == b.str());
}

TEST_CASE("discretization guards") {
    const auto p = control::counterexample();
    auto fam = bridge::standard_unit_family({});

    auto capped = tiny_opts();
    capped.node_cap = 3;
    CHECK_THROWS_AS(bridge::discretize(p, {0.0, 0.0}, fam, capped), capacity_error);

    bridge::DiscretizeOptions absorbed = tiny_opts();
    CHECK_THROWS_AS(bridge::discretize(p, {3.0, 0.0}, fam, absorbed), domain_error);
    CHECK_THROWS_AS(bridge::discretize(p, {0.0, 0.0}, {}, tiny_opts()), domain_error);
    CHECK_THROWS_AS(bridge::discretize(p, {0.0}, fam, tiny_opts()), domain_error);

    auto bad = tiny_opts();
    bad.quant = 0.0;
    CHECK_THROWS_AS(bridge::discretize(p, {0.0, 0.0}, fam, bad), domain_error);
    bad = tiny_opts();
    bad.depth = 0;
    CHECK_THROWS_AS(bridge::discretize(p, {0.0, 0.0}, fam, bad), domain_error);

    CHECK_THROWS_AS(bridge::standard_unit_family({1.5}), domain_error);
    CHECK_THROWS_AS(bridge::standard_unit_family({0.0}), domain_error);
}

TEST_CASE("bridged values track the continuous estimates") {
    auto bp = experiments::bridged_counterexample(1e-2);
    CHECK(bp.graph.size() <= 2'000'000);

    auto hz = bridge::horizon_error_audit(bp, {5.0, 10.0});
    CHECK(hz.all_pass());
    CHECK(hz.rows().size() == 2);

    auto dc = bridge::discount_error_audit(bp, {0.5, 0.1});
    CHECK(dc.all_pass());

    CHECK_THROWS_AS(bridge::horizon_error_audit(bp, {}), domain_error);
    CHECK_THROWS_AS(bridge::horizon_error_audit(bp, {0.5}), domain_error);
    CHECK_THROWS_AS(bridge::discount_error_audit(bp, {}), domain_error);
    CHECK_THROWS_AS(bridge::discount_error_audit(bp, {1.0}), domain_error);
}
