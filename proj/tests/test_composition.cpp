#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "suprb/composition.hpp"
#include "suprb/errors.hpp"

using namespace suprb;
using oracle::box;

namespace {

Dataset wave() { return oracle::sample_1d([](double x) { return std::sin(3 * x); }, 50, 0.05, 31); }

Pool random_pool(const Dataset& ds, std::size_t n, std::uint64_t seed)
{
    Pool pool;
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (pool.size() < n) {
        const double a = u(rng), b = u(rng);
        Rule r = fit_rule(box({std::min(a, b)}, {std::max(a, b)}), ds, 0.01);
        if (!r.degenerate()) {
            pool.add(std::move(r));
        }
    }
    return pool;
}

Genome genome_from_bits(unsigned bits, std::size_t n)
{
    Genome g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = ((bits >> i) & 1U) != 0;
    }
    return g;
}

} // namespace

TEST_CASE("evaluate_candidate")
{
    const auto ds = wave();
    const auto pool = random_pool(ds, 6, 1);
    const FitnessParams fp{0.5, 2.0};

    const auto none = evaluate_candidate(Genome(6, false), pool, ds, fp);
    double sse = 0.0;
    for (std::size_t j = 0; j < ds.rows(); ++j) {
        sse += (ds.target(j) - ds.target_mean()) * (ds.target(j) - ds.target_mean());
    }
    CHECK(none.mse == doctest::Approx(sse / 50.0));
    CHECK(none.complexity == 0);

    const PoolResponses cache(pool, ds);
    for (unsigned bits = 0; bits < 64; ++bits) {
        const auto g = genome_from_bits(bits, 6);
        const auto a = evaluate_candidate(g, pool, ds, fp);
        const auto b = evaluate_candidate(g, pool, ds, fp);
        const auto c = cache.evaluate(g, fp);
        CHECK(a.mse == b.mse);
        CHECK(a.mse == c.mse);
        CHECK(a.fitness == c.fitness);
        CHECK(a.complexity == static_cast<std::size_t>(std::count(g.begin(), g.end(), true)));
        CHECK(a.fitness == candidate_fitness(a.mse, a.complexity, pool.size(), fp));
    }
}

TEST_CASE("tournament with k=2 over a fit/unfit pair")
{
    // Exact enumeration: of the 4 equally likely ordered draws only (weak, weak) loses.
    std::vector<SolutionCandidate> pop(2);
    pop[0].fitness = 0.9;
    pop[1].fitness = 0.1;
    int losing = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            losing += (a == 1 && b == 1) ? 1 : 0;
        }
    }
    const double p_win = 1.0 - losing / 4.0;
    CHECK(p_win == 0.75);

    Rng rng(5);
    int wins = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        wins += tournament_select(pop, 2, rng) == 0 ? 1 : 0;
    }
    CHECK(oracle::within_3_sigma(wins, trials, p_win));
}

TEST_CASE("tournament with k=1 is uniform and ties prefer lower complexity")
{
    std::vector<SolutionCandidate> pop(4);
    Rng rng(6);
    std::array<int, 4> counts{};
    const int trials = 8000;
    for (int t = 0; t < trials; ++t) {
        ++counts[tournament_select(pop, 1, rng)];
    }
    for (const int c : counts) {
        CHECK(oracle::within_3_sigma(c, trials, 0.25));
    }

    std::vector<SolutionCandidate> tied(2);
    tied[0].fitness = tied[1].fitness = 0.5;
    tied[0].complexity = 3;
    tied[1].complexity = 1;
    int simple = 0;
    for (int t = 0; t < 4000; ++t) {
        simple += tournament_select(tied, 2, rng) == 1 ? 1 : 0;
    }
    CHECK(oracle::within_3_sigma(simple, 4000, 0.75));

    CHECK_THROWS_AS((void)tournament_select(std::vector<SolutionCandidate>{}, 2, rng), UsageError);
}

TEST_CASE("crossover conserves bits positionwise")
{
    Rng rng(8);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t len = 2 + static_cast<std::size_t>(t % 30);
        Genome a(len), b(len);
        for (std::size_t i = 0; i < len; ++i) {
            a[i] = coin(rng);
            b[i] = coin(rng);
        }
        const std::size_t n = 1 + static_cast<std::size_t>(t) % (len - 1);
        const auto [c1, c2] = crossover_npoint(a, b, n, 1.0, rng);
        REQUIRE(c1.size() == len);
        for (std::size_t i = 0; i < len; ++i) {
            CHECK(((c1[i] == a[i] && c2[i] == b[i]) || (c1[i] == b[i] && c2[i] == a[i])));
        }
    }
}

TEST_CASE("crossover edge cases")
{
    Rng rng(9);
    const Genome a{true, false, true, true, false, false};
    const Genome b{false, true, false, false, true, true};
    const auto [k1, k2] = crossover_npoint(a, b, 3, 0.0, rng);
    CHECK(k1 == a);
    CHECK(k2 == b);

    const auto [s1, s2] = crossover_npoint(a, a, 2, 1.0, rng);
    CHECK(s1 == a);
    CHECK(s2 == a);

    // One cut on complementary parents: child1 switches source exactly once.
    const auto [o1, o2] = crossover_npoint(a, b, 1, 1.0, rng);
    int switches = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        switches += ((o1[i] == a[i]) != (o1[i - 1] == a[i - 1])) ? 1 : 0;
    }
    CHECK(switches == 1);

    CHECK_THROWS_AS((void)crossover_npoint(a, Genome{true}, 1, 1.0, rng), UsageError);
    CHECK_THROWS_AS((void)crossover_npoint(a, b, 6, 1.0, rng), UsageError);
}

TEST_CASE("bit-flip mutation")
{
    Rng rng(10);
    Genome g(1000);
    for (std::size_t i = 0; i < g.size(); i += 3) {
        g[i] = true;
    }
    CHECK(mutate_bits(g, 0.0, rng) == g);
    const auto flipped = mutate_bits(g, 1.0, rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(flipped[i] != g[i]);
    }
    const auto half = mutate_bits(g, 0.5, rng);
    int diff = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        diff += half[i] != g[i] ? 1 : 0;
    }
    CHECK(oracle::within_3_sigma(diff, 1000, 0.5));
    CHECK_THROWS_AS((void)mutate_bits(g, 1.5, rng), UsageError);
}

TEST_CASE("compose keeps elitist progress monotone and the pool untouched")
{
    const auto ds = wave();
    const auto pool = random_pool(ds, 12, 2);
    const auto snapshot = pool;
    CompositionParams p;
    p.generations_per_phase = 40;
    Rng rng(11);
    const auto res = compose(pool, ds, p, {}, rng);

    REQUIRE(res.best_fitness_history.size() == p.generations_per_phase + 1);
    for (std::size_t g = 1; g < res.best_fitness_history.size(); ++g) {
        CHECK(res.best_fitness_history[g] >= res.best_fitness_history[g - 1]);
    }
    CHECK(res.population.size() == p.population_size);
    for (const auto& c : res.population) {
        CHECK(c.genome.size() == pool.size());
    }
    const auto again = evaluate_candidate(res.best.genome, pool, ds, p.fitness);
    CHECK(again.mse == res.best.mse);
    CHECK(again.fitness == res.best.fitness);
    CHECK(again.complexity == res.best.complexity);

    for (std::size_t k = 0; k < pool.size(); ++k) {
        CHECK(pool[k].condition.lower == snapshot[k].condition.lower);
        CHECK(pool[k].submodel.coefficients == snapshot[k].submodel.coefficients);
        CHECK(pool[k].in_sample_error == snapshot[k].in_sample_error);
    }
}

TEST_CASE("compose warm start zero-pads prior genomes")
{
    const auto ds = wave();
    auto pool = random_pool(ds, 5, 3);
    CompositionParams p;
    p.generations_per_phase = 10;
    Rng rng(12);
    const auto first = compose(pool, ds, p, {}, rng);

    const auto grown = random_pool(ds, 4, 99);
    for (const auto& r : grown) {
        pool.add(r);
    }
    CompositionParams zero = p;
    zero.generations_per_phase = 1;
    zero.mutation_rate = 0.0;
    zero.crossover_prob = 0.0;
    const auto second = compose(pool, ds, zero, first.population, rng);
    // The zero-padded prior best keeps its MSE and complexity and gains fitness.
    Genome padded = first.best.genome;
    padded.resize(pool.size(), false);
    const auto re = evaluate_candidate(padded, pool, ds, p.fitness);
    CHECK(re.mse == first.best.mse);
    CHECK(re.complexity == first.best.complexity);
    CHECK(re.fitness >= first.best.fitness);
    CHECK(second.best.fitness >= re.fitness);
    for (const auto& c : second.population) {
        CHECK(c.genome.size() == pool.size());
    }
}

TEST_CASE("compose on a single perfect rule picks the better of the two genomes")
{
    const auto ds = oracle::sample_1d([](double x) { return 2.0 * x; }, 30, 0.0, 40);
    Pool pool;
    pool.add(fit_rule(box({-1}, {1}), ds, 0.0));
    CompositionParams p;
    p.population_size = 8;
    p.generations_per_phase = 5;
    Rng rng(13);
    const auto res = compose(pool, ds, p, {}, rng);
    const auto off = evaluate_candidate(Genome{false}, pool, ds, p.fitness);
    const auto on = evaluate_candidate(Genome{true}, pool, ds, p.fitness);
    const auto& expected = ranks_before(on, off) ? on : off;
    CHECK(res.best.genome == expected.genome);
    CHECK(res.best.fitness == expected.fitness);
}

TEST_CASE("compose against exhaustive enumeration")
{
    const auto ds = oracle::sample_1d([](double x) { return std::abs(x) + 0.5 * x * x; }, 60, 0.02, 50);
    const auto pool = random_pool(ds, 10, 4);
    CompositionParams p;
    p.population_size = 64;
    p.generations_per_phase = 200;

    double optimum = 0.0;
    for (unsigned bits = 0; bits < 1024; ++bits) {
        optimum = std::max(optimum, evaluate_candidate(genome_from_bits(bits, 10), pool, ds, p.fitness).fitness);
    }
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const auto res = compose(pool, ds, p, {}, rng);
        CHECK(res.best.fitness >= 0.95 * optimum);
        CHECK(res.best.fitness <= optimum);
        exact += res.best.fitness == optimum ? 1 : 0;
    }
    CHECK(exact >= 8);
}

TEST_CASE("composition params validation")
{
    CompositionParams p;
    CHECK_NOTHROW(p.validate());
    p.elitists = p.population_size;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.tournament_k = p.population_size + 1;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.crossover_prob = 1.5;
    CHECK_THROWS_AS(p.validate(), UsageError);
}
