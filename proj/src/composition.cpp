#include "suprb/composition.hpp"

#include <algorithm>
#include <cmath>

#include "suprb/errors.hpp"

namespace suprb {

void CompositionParams::validate() const
{
    if (population_size < 1) {
        throw UsageError("composition.population_size must be at least 1");
    }
    if (tournament_k < 1 || tournament_k > population_size) {
        throw UsageError("composition.tournament_k must lie in [1, population_size]");
    }
    if (crossover_points < 1) {
        throw UsageError("composition.crossover_points must be at least 1");
    }
    if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
        throw UsageError("composition.crossover_prob must lie in [0, 1]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw UsageError("composition.mutation_rate must lie in [0, 1]");
    }
    if (elitists >= population_size) {
        throw UsageError("composition.elitists must be smaller than population_size");
    }
    if (generations_per_phase < 1) {
        throw UsageError("composition.generations_per_phase must be at least 1");
    }
    fitness.validate();
}

namespace {

std::size_t popcount(const Genome& g) { return static_cast<std::size_t>(std::count(g.begin(), g.end(), true)); }

} // namespace

SolutionCandidate evaluate_candidate(const Genome& genome, const Pool& pool, const Dataset& data,
                                     const FitnessParams& params)
{
    SolutionCandidate c;
    c.genome = genome;
    double sse = 0.0;
    for (std::size_t j = 0; j < data.rows(); ++j) {
        const double r = data.target(j) - predict_mixed(genome, pool, data.row(j), data.target_mean());
        sse += r * r;
    }
    c.mse = sse / static_cast<double>(data.rows());
    c.complexity = popcount(genome);
    c.fitness = candidate_fitness(c.mse, c.complexity, pool.size(), params);
    return c;
}

PoolResponses::PoolResponses(const Pool& pool, const Dataset& data)
    : data_(&data)
    , rows_(data.rows())
    , weights_(pool.size())
    , predictions_(pool.size() * data.rows())
    , matched_(pool.size() * data.rows())
{
    for (std::size_t k = 0; k < pool.size(); ++k) {
        weights_[k] = mixing_weight(pool[k]);
        for (std::size_t j = 0; j < rows_; ++j) {
            const bool m = matches(pool[k].condition, data.row(j));
            matched_[k * rows_ + j] = m ? 1 : 0;
            predictions_[k * rows_ + j] = m ? predict_rule(pool[k], data.row(j)) : 0.0;
        }
    }
}

SolutionCandidate PoolResponses::evaluate(const Genome& genome, const FitnessParams& params) const
{
    if (genome.size() != weights_.size()) {
        throw UsageError("genome length does not match pool size");
    }
    std::vector<std::size_t> selected;
    for (std::size_t k = 0; k < genome.size(); ++k) {
        if (genome[k]) {
            selected.push_back(k);
        }
    }

    // Same accumulation order as predict_mixed, so results match bitwise.
    const double fallback = data_->target_mean();
    double sse = 0.0;
    for (std::size_t j = 0; j < rows_; ++j) {
        double weighted = 0.0;
        double total = 0.0;
        for (const auto k : selected) {
            if (matched_[k * rows_ + j] != 0) {
                const double w = weights_[k];
                weighted += w * predictions_[k * rows_ + j];
                total += w;
            }
        }
        const double pred = total > 0.0 ? weighted / total : fallback;
        const double r = data_->target(j) - pred;
        sse += r * r;
    }

    SolutionCandidate c;
    c.genome = genome;
    c.mse = sse / static_cast<double>(rows_);
    c.complexity = selected.size();
    c.fitness = candidate_fitness(c.mse, c.complexity, weights_.size(), params);
    return c;
}

bool ranks_before(const SolutionCandidate& a, const SolutionCandidate& b)
{
    if (a.fitness != b.fitness) {
        return a.fitness > b.fitness;
    }
    return a.complexity < b.complexity;
}

std::size_t tournament_select(std::span<const SolutionCandidate> population, std::size_t k, Rng& rng)
{
    if (population.empty()) {
        throw UsageError("tournament over an empty population");
    }
    if (k < 1) {
        throw UsageError("tournament size must be at least 1");
    }
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    std::size_t winner = pick(rng);
    for (std::size_t draw = 1; draw < k; ++draw) {
        const std::size_t i = pick(rng);
        const auto& a = population[i];
        const auto& w = population[winner];
        if (ranks_before(a, w) || (!ranks_before(w, a) && i < winner)) {
            winner = i;
        }
    }
    return winner;
}

std::pair<Genome, Genome> crossover_npoint(const Genome& a, const Genome& b, std::size_t n_points,
                                           double crossover_prob, Rng& rng)
{
    if (a.size() != b.size()) {
        throw UsageError("crossover parents differ in length");
    }
    if (n_points < 1 || n_points >= a.size()) {
        throw UsageError("crossover needs 1 <= n_points < genome length");
    }
    std::bernoulli_distribution apply(crossover_prob);
    if (!apply(rng)) {
        return {a, b};
    }

    // Cut positions are boundaries 1..L-1; a cut at p swaps sources from index p on.
    std::vector<std::size_t> positions(a.size() - 1);
    for (std::size_t p = 0; p < positions.size(); ++p) {
        positions[p] = p + 1;
    }
    std::vector<std::size_t> cuts;
    cuts.reserve(n_points);
    std::sample(positions.begin(), positions.end(), std::back_inserter(cuts), n_points, rng);

    Genome c1(a.size());
    Genome c2(a.size());
    bool swapped = false;
    std::size_t next_cut = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        while (next_cut < cuts.size() && cuts[next_cut] == i) {
            swapped = !swapped;
            ++next_cut;
        }
        c1[i] = swapped ? b[i] : a[i];
        c2[i] = swapped ? a[i] : b[i];
    }
    return {std::move(c1), std::move(c2)};
}

Genome mutate_bits(Genome genome, double rate, Rng& rng)
{
    if (!(rate >= 0.0 && rate <= 1.0)) {
        throw UsageError("mutation rate must lie in [0, 1]");
    }
    std::bernoulli_distribution flip(rate);
    for (std::size_t i = 0; i < genome.size(); ++i) {
        if (flip(rng)) {
            genome[i] = !genome[i];
        }
    }
    return genome;
}

namespace {

std::vector<std::size_t> ranked_indices(const std::vector<SolutionCandidate>& population)
{
    std::vector<std::size_t> order(population.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return ranks_before(population[x], population[y]); });
    return order;
}

} // namespace

CompositionResult compose(const Pool& pool, const Dataset& data, const CompositionParams& params,
                          std::span<const SolutionCandidate> warm, Rng& rng)
{
    params.validate();
    if (pool.empty()) {
        throw UsageError("cannot compose a solution from an empty pool");
    }
    const std::size_t length = pool.size();
    const PoolResponses responses(pool, data);

    std::vector<SolutionCandidate> population;
    population.reserve(params.population_size);
    for (const auto& prior : warm) {
        if (population.size() == params.population_size) {
            break;
        }
        if (prior.genome.size() > length) {
            throw UsageError("warm-start genome is longer than the pool");
        }
        Genome g = prior.genome;
        g.resize(length, false);
        population.push_back(responses.evaluate(g, params.fitness));
    }
    std::bernoulli_distribution coin(0.5);
    while (population.size() < params.population_size) {
        Genome g(length);
        for (std::size_t i = 0; i < length; ++i) {
            g[i] = coin(rng);
        }
        population.push_back(responses.evaluate(g, params.fitness));
    }

    CompositionResult result;
    result.best = population[ranked_indices(population).front()];
    result.best_fitness_history.push_back(result.best.fitness);

    // Crossover needs at least one cut boundary.
    const std::size_t n_points = std::min(params.crossover_points, length - 1);

    for (std::size_t gen = 0; gen < params.generations_per_phase; ++gen) {
        const auto order = ranked_indices(population);
        std::vector<SolutionCandidate> next;
        next.reserve(params.population_size);
        for (std::size_t e = 0; e < params.elitists; ++e) {
            next.push_back(population[order[e]]);
        }
        while (next.size() < params.population_size) {
            const auto& pa = population[tournament_select(population, params.tournament_k, rng)].genome;
            const auto& pb = population[tournament_select(population, params.tournament_k, rng)].genome;
            auto [c1, c2] = n_points > 0 ? crossover_npoint(pa, pb, n_points, params.crossover_prob, rng)
                                         : std::pair<Genome, Genome>{pa, pb};
            next.push_back(responses.evaluate(mutate_bits(std::move(c1), params.mutation_rate, rng), params.fitness));
            if (next.size() < params.population_size) {
                next.push_back(
                    responses.evaluate(mutate_bits(std::move(c2), params.mutation_rate, rng), params.fitness));
            }
        }
        population = std::move(next);

        double gen_best = population.front().fitness;
        for (const auto& c : population) {
            gen_best = std::max(gen_best, c.fitness);
            if (ranks_before(c, result.best)) {
                result.best = c;
            }
        }
        result.best_fitness_history.push_back(gen_best);
    }
    result.population = std::move(population);
    return result;
}

} // namespace suprb
