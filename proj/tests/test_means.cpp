#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tauberian/means.hpp"

using namespace tauberian;
using Catch::Approx;

namespace {
means::BoundedSequence alternating() {
    return means::BoundedSequence::periodic({1.0, 0.0}, 0.0, 1.0);
}
}  // namespace

TEST_CASE("cesaro mean of the alternating sequence") {
    auto a = alternating();
    CHECK(means::cesaro_mean(a, 2) == Approx(0.5).margin(1e-15));
    CHECK(means::cesaro_mean(a, 1000) == Approx(0.5).margin(1e-15));
    CHECK(means::cesaro_mean(a, 7) == Approx(4.0 / 7.0).margin(1e-15));
    CHECK(means::cesaro_mean(a, 1) == 1.0);
}

TEST_CASE("abel mean closed forms") {
    auto a = alternating();
    CHECK(means::abel_mean(a, 0.5) == Approx(oracles::kAbelAlternatingHalf).margin(1e-12));
    CHECK(means::abel_mean(a, 0.1) == Approx(oracles::kAbelAlternatingTenth).margin(1e-12));
    // full weight on the first entry
    CHECK(means::abel_mean(a, 1.0) == 1.0);
    auto c = means::BoundedSequence::constant(0.37);
    for (double lam : {0.9, 0.2, 1e-3})
        CHECK(means::abel_mean(c, lam) == Approx(0.37).margin(1e-10));
}

TEST_CASE("abel mean rejects bad discounts") {
    auto a = alternating();
    CHECK_THROWS_AS(means::abel_mean(a, 0.0), domain_error);
    CHECK_THROWS_AS(means::abel_mean(a, 1.5), domain_error);
    CHECK_THROWS_AS(means::cesaro_mean(a, 0), domain_error);
}

TEST_CASE("means stay inside the production bounds") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> vals(64);
    for (auto& v : vals) v = unit(rng);
    auto a = means::BoundedSequence::from_values(vals, 0.0, 1.0);
    for (std::size_t n : {1, 5, 17, 64}) {
        const double m = means::cesaro_mean(a, n);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
    for (double lam : {0.99, 0.4}) {
        const double m = means::abel_mean(a, lam);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
    // small discounts need more terms than a finite sample provides
    CHECK_THROWS_AS(means::abel_mean(a, 0.02), insufficient_data_error);
    auto b = means::BoundedSequence::from_rule(
        [](std::size_t i) { return static_cast<double>(i % 7) / 7.0; }, 0.0, 1.0);
    for (double lam : {0.4, 0.02, 1e-3}) {
        const double m = means::abel_mean(b, lam);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
}

TEST_CASE("bounded sequence production is checked") {
    auto bad = means::BoundedSequence::from_rule([](std::size_t) { return 2.0; }, 0.0, 1.0);
    CHECK_THROWS_AS(means::cesaro_mean(bad, 3), domain_error);
    CHECK_THROWS_AS(means::BoundedSequence::periodic({}, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(means::BoundedSequence::from_values({0.5}, 1.0, 0.0), domain_error);
}

TEST_CASE("time average of a sampled exponential") {
    const double h = 1e-3;
    auto g = means::SampledFunction::from_function([](double s) { return std::exp(-s); }, h,
                                                   1.0, 0.0, 1.0);
    CHECK(means::time_average(g, 1.0) == Approx(oracles::kTimeAvgExpOne).margin(1e-6));
    CHECK_THROWS_AS(means::time_average(g, 0.0), domain_error);
}

TEST_CASE("discounted averages against closed forms") {
    const double h = 1e-3;
    auto ind = means::SampledFunction::from_function(
        [](double s) { return s <= 7.0 ? 1.0 : 0.0; }, h, 1.0, 0.0, 1.0);
    CHECK(means::discounted_average(ind, 0.1) ==
          Approx(oracles::kDiscountedIndicator7).margin(1e-3));

    auto wave = means::SampledFunction::from_function(
        [](double s) { return std::fmod(s, 2.0) < 1.0 ? 1.0 : 0.0; }, h, 1.0, 0.0, 1.0);
    CHECK(means::discounted_average(wave, 0.1) ==
          Approx(oracles::kDiscountedSquareWave).margin(1e-3));
}

TEST_CASE("hardy littlewood table structure") {
    auto rep = means::hardy_littlewood_report(alternating(), {4, 16, 64}, {0.5, 0.1, 0.01});
    CHECK(rep.all_pass());
    std::size_t vn = 0, vl = 0, windows = 0;
    for (const auto& row : rep.rows()) {
        if (row.label == "V_n") ++vn;
        if (row.label == "V_lambda") ++vl;
        if (row.label.rfind("window_", 0) == 0) ++windows;
    }
    CHECK(vn == 3);
    CHECK(vl == 3);
    CHECK(windows == 2);
    CHECK_THROWS_AS(means::hardy_littlewood_report(alternating(), {16, 4}, {0.5}),
                    domain_error);
    CHECK_THROWS_AS(means::hardy_littlewood_report(alternating(), {4}, {0.1, 0.5}),
                    domain_error);
}
