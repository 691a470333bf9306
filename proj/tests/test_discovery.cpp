#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "suprb/discovery.hpp"
#include "suprb/errors.hpp"
#include "suprb/fitness.hpp"

using namespace suprb;
using oracle::box;

namespace {

Dataset grid_3()
{
    return oracle::make_dataset({{0.0}, {1.0}, {2.0}}, {0.0, 1.0, 2.0});
}

} // namespace

TEST_CASE("seed selection with a single non-zero residual")
{
    const auto ds = grid_3();
    Rng rng(1);
    const std::vector<double> res{0.0, 0.0, 5.0};
    for (int i = 0; i < 100; ++i) {
        CHECK(select_seed_example(ds, res, rng) == 2);
    }
}

TEST_CASE("seed selection falls back to uniform")
{
    const auto ds = grid_3();
    Rng rng(2);
    const std::vector<double> res{0.0, 0.0, 0.0};
    std::array<int, 3> counts{};
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        ++counts[select_seed_example(ds, res, rng)];
    }
    for (const int c : counts) {
        CHECK(oracle::within_3_sigma(c, draws, 1.0 / 3.0));
    }
}

TEST_CASE("seed selection is proportional to squared residuals")
{
    const auto ds = oracle::make_dataset({{0.0}, {1.0}}, {0.0, 1.0});
    Rng rng(3);
    const std::vector<double> res{1.0, -2.0};
    int hits = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        hits += select_seed_example(ds, res, rng) == 1 ? 1 : 0;
    }
    CHECK(oracle::within_3_sigma(hits, draws, 4.0 / 5.0));
    CHECK_THROWS_AS((void)select_seed_example(ds, std::vector<double>{1.0}, rng), UsageError);
}

TEST_CASE("initial condition always covers the seed example")
{
    const auto ds = oracle::sample_1d([](double x) { return x; }, 50, 0.0, 4);
    Rng rng(5);
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        for (const double sigma : {1e-9, 0.1, 5.0}) {
            const auto cond = initial_condition(ds.row(j), ds, sigma, rng);
            CHECK(matches(cond, ds.row(j)));
            CHECK(cond.lower[0] >= ds.feature_bounds()[0].min);
            CHECK(cond.upper[0] <= ds.feature_bounds()[0].max);
        }
    }
}

TEST_CASE("initial condition shrinks to the point and clips at the corner")
{
    const auto ds = oracle::make_dataset({{0.0, 0.0}, {1.0, 2.0}, {0.5, 1.0}}, {0.0, 1.0, 2.0});
    Rng rng(6);
    const auto point = initial_condition(ds.row(2), ds, 1e-14, rng);
    CHECK(point.lower[0] == doctest::Approx(0.5));
    CHECK(point.upper[1] == doctest::Approx(1.0));

    const auto corner = initial_condition(ds.row(0), ds, 0.2, rng);
    CHECK(corner.lower[0] == 0.0);
    CHECK(corner.lower[1] == 0.0);
}

TEST_CASE("mutation only grows and never shrinks volume")
{
    const auto ds = oracle::make_dataset({{-1.0, 0.0}, {1.0, 10.0}, {0.0, 5.0}}, {0.0, 1.0, 2.0});
    Rng rng(7);
    auto cond = box({-0.1, 4.0}, {0.1, 6.0});
    double v = volume_share(cond, ds.feature_bounds());
    for (int t = 0; t < 200; ++t) {
        const auto child = mutate_condition(cond, ds, 0.05, rng);
        for (int i = 0; i < 2; ++i) {
            CHECK(child.lower[i] <= cond.lower[i]);
            CHECK(child.upper[i] >= cond.upper[i]);
        }
        const double cv = volume_share(child, ds.feature_bounds());
        CHECK(cv >= v);
        cond = child;
        v = cv;
    }

    const auto full = box({-1.0, 0.0}, {1.0, 10.0});
    const auto same = mutate_condition(full, ds, 0.5, rng);
    CHECK(same.lower == full.lower);
    CHECK(same.upper == full.upper);
}

TEST_CASE("discover_rule with delta 1 stops after one iteration when children are worse")
{
    const auto ds = oracle::sample_1d([](double x) { return x; }, 40, 0.0, 8);
    DiscoveryParams p;
    p.delta = 1;
    p.lambda = 4;
    std::size_t calls = 0;
    // Seed scores 1, every child scores less.
    RuleFitnessFn fn = [&calls](const Rule&) { return calls++ == 0 ? 1.0 : 0.5; };
    const std::vector<double> res(ds.rows(), 1.0);
    Rng rng(9);
    DiscoveryTrace trace;
    const Rule r = discover_rule(ds, res, p, rng, fn, &trace);
    CHECK(trace.iterations == 1);
    CHECK(trace.stalled);
    CHECK(trace.returned_iteration == 0);
    CHECK(r.fitness == 1.0);
    CHECK(calls == 1 + p.lambda);
}

TEST_CASE("discover_rule keeps searching while elitists tie")
{
    const auto ds = oracle::sample_1d([](double x) { return x; }, 20, 0.0, 8);
    DiscoveryParams p;
    p.delta = 2;
    p.lambda = 2;
    p.max_iter = 25;
    RuleFitnessFn flat = [](const Rule&) { return 0.5; };
    Rng rng(1);
    DiscoveryTrace trace;
    (void)discover_rule(ds, std::vector<double>(ds.rows(), 1.0), p, rng, flat, &trace);
    CHECK_FALSE(trace.stalled);
    CHECK(trace.iterations == 25);
}

TEST_CASE("discover_rule returns non-degenerate rules with parent fitness never decreasing")
{
    const auto ds = oracle::sample_1d([](double x) { return std::abs(x); }, 120, 0.02, 10);
    DiscoveryParams p;
    const std::vector<double> res(ds.rows(), 1.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        DiscoveryTrace trace;
        const Rule r = discover_rule(ds, res, p, rng, &trace);
        CHECK_FALSE(r.degenerate());
        CHECK(r.fitness == doctest::Approx(rule_fitness(r, ds.feature_bounds(), p.fitness)));
        CHECK(r.fitness == trace.elitist_fitness[trace.returned_iteration]);
        if (trace.stalled) {
            const auto it = trace.returned_iteration;
            for (std::size_t k = it + 1; k < trace.elitist_fitness.size(); ++k) {
                CHECK(trace.elitist_fitness[it] > trace.elitist_fitness[k]);
            }
        }
    }
}

TEST_CASE("discover_rule approaches the full-range rule on globally linear data")
{
    const auto ds = oracle::sample_1d([](double x) { return 3.0 * x - 1.0; }, 100, 0.0, 12);
    DiscoveryParams p;
    Rule full = fit_rule(box({ds.feature_bounds()[0].min}, {ds.feature_bounds()[0].max}), ds, p.ridge_lambda);
    const double reference = rule_fitness(full, ds.feature_bounds(), p.fitness);
    const std::vector<double> res(ds.rows(), 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const Rule r = discover_rule(ds, res, p, rng);
        CHECK(r.in_sample_error < 1e-6);
        CHECK(r.fitness >= 0.9 * reference);
    }
}

TEST_CASE("discover_rule is deterministic")
{
    const auto ds = oracle::sample_1d([](double x) { return x * x; }, 60, 0.05, 13);
    const std::vector<double> res(ds.rows(), 1.0);
    DiscoveryParams p;
    Rng a(77), b(77);
    const Rule ra = discover_rule(ds, res, p, a);
    const Rule rb = discover_rule(ds, res, p, b);
    CHECK(ra.condition.lower == rb.condition.lower);
    CHECK(ra.condition.upper == rb.condition.upper);
    CHECK(ra.submodel.coefficients == rb.submodel.coefficients);
    CHECK(ra.fitness == rb.fitness);
}

TEST_CASE("discover_rules runs independent streams")
{
    const auto ds = oracle::sample_1d([](double x) { return std::sin(4 * x); }, 80, 0.05, 14);
    const std::vector<double> res(ds.rows(), 1.0);
    DiscoveryParams p;

    p.rules_per_phase = 1;
    Rng one(3);
    CHECK(discover_rules(ds, res, p, one).size() == 1);

    p.rules_per_phase = 2;
    Rng master(21);
    const auto rules = discover_rules(ds, res, p, master);
    REQUIRE(rules.size() == 2);

    // Same streams executed in swapped order give the same multiset.
    Rng split(21);
    const auto s0 = split_seed(split);
    const auto s1 = split_seed(split);
    Rng r1(s1), r0(s0);
    const Rule second = discover_rule(ds, res, p, r1);
    const Rule first = discover_rule(ds, res, p, r0);
    CHECK(first.condition.lower == rules[0].condition.lower);
    CHECK(first.condition.upper == rules[0].condition.upper);
    CHECK(second.condition.lower == rules[1].condition.lower);
    CHECK(second.condition.upper == rules[1].condition.upper);
}

TEST_CASE("discovery params validation")
{
    DiscoveryParams p;
    CHECK_NOTHROW(p.validate());
    p.lambda = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.delta = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.rules_per_phase = 0;
    CHECK_THROWS_AS(p.validate(), UsageError);
}
