#include "suprb/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

#include "suprb/errors.hpp"

namespace suprb {

void DiscoveryParams::validate() const
{
    if (lambda < 1) {
        throw UsageError("discovery.lambda must be at least 1");
    }
    if (delta < 1) {
        throw UsageError("discovery.delta must be at least 1");
    }
    if (rules_per_phase < 1) {
        throw UsageError("discovery.rules_per_phase must be at least 1");
    }
    if (max_iter < 1) {
        throw UsageError("discovery.max_iter must be at least 1");
    }
    if (!(mutation_sigma > 0.0) || !std::isfinite(mutation_sigma)) {
        throw UsageError("discovery.mutation_sigma must be positive");
    }
    if (!(init_sigma > 0.0) || !std::isfinite(init_sigma)) {
        throw UsageError("discovery.init_sigma must be positive");
    }
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
        throw UsageError("ridge_lambda must be non-negative");
    }
    fitness.validate();
}

std::size_t select_seed_example(const Dataset& data, std::span<const double> residuals, Rng& rng)
{
    if (data.rows() == 0) {
        throw UsageError("cannot select a seed from an empty dataset");
    }
    if (residuals.size() != data.rows()) {
        throw UsageError("residual count does not match dataset rows");
    }
    std::vector<double> weights(residuals.size());
    double total = 0.0;
    for (std::size_t j = 0; j < residuals.size(); ++j) {
        weights[j] = residuals[j] * residuals[j];
        total += weights[j];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::uniform_int_distribution<std::size_t> uniform(0, data.rows() - 1);
        return uniform(rng);
    }
    std::discrete_distribution<std::size_t> roulette(weights.begin(), weights.end());
    return roulette(rng);
}

IntervalCondition initial_condition(std::span<const double> x, const Dataset& data, double sigma_init, Rng& rng)
{
    if (x.size() != data.dims()) {
        throw UsageError("seed example dimension does not match dataset");
    }
    const auto& bounds = data.feature_bounds();
    IntervalCondition cond{Vector(static_cast<Eigen::Index>(x.size())), Vector(static_cast<Eigen::Index>(x.size()))};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double scale = sigma_init * bounds[i].range();
        const auto k = static_cast<Eigen::Index>(i);
        cond.lower[k] = x[i] - halfnormal(rng, scale);
        cond.upper[k] = x[i] + halfnormal(rng, scale);
    }
    cond.clip(bounds);
    return cond;
}

IntervalCondition mutate_condition(const IntervalCondition& parent, const Dataset& data, double sigma, Rng& rng)
{
    if (parent.dims() != data.dims()) {
        throw UsageError("condition dimension does not match dataset");
    }
    const auto& bounds = data.feature_bounds();
    IntervalCondition child = parent;
    for (std::size_t i = 0; i < parent.dims(); ++i) {
        const double scale = sigma * bounds[i].range();
        const auto k = static_cast<Eigen::Index>(i);
        child.lower[k] -= halfnormal(rng, scale);
        child.upper[k] += halfnormal(rng, scale);
    }
    child.clip(bounds);
    return child;
}

namespace {

Rule fit_and_score(const IntervalCondition& cond, const Dataset& data, const DiscoveryParams& params,
                   const RuleFitnessFn& fitness)
{
    Rule rule = fit_rule(cond, data, params.ridge_lambda);
    rule.fitness = rule.degenerate() ? 0.0 : fitness(rule);
    return rule;
}

} // namespace

Rule discover_rule(const Dataset& data, std::span<const double> residuals, const DiscoveryParams& params, Rng& rng,
                   DiscoveryTrace* trace)
{
    const auto& bounds = data.feature_bounds();
    const FitnessParams fp = params.fitness;
    return discover_rule(
        data, residuals, params, rng, [&bounds, fp](const Rule& r) { return rule_fitness(r, bounds, fp); }, trace);
}

Rule discover_rule(const Dataset& data, std::span<const double> residuals, const DiscoveryParams& params, Rng& rng,
                   const RuleFitnessFn& fitness, DiscoveryTrace* trace)
{
    params.validate();
    DiscoveryTrace local;
    DiscoveryTrace& tr = trace != nullptr ? *trace : local;
    tr = DiscoveryTrace{};

    std::optional<Rule> seed;
    for (std::size_t attempt = 0; attempt <= params.max_retries; ++attempt) {
        const std::size_t j = select_seed_example(data, residuals, rng);
        Rule candidate = fit_and_score(initial_condition(data.row(j), data, params.init_sigma, rng), data, params,
                                       fitness);
        if (!candidate.degenerate()) {
            seed = std::move(candidate);
            break;
        }
        if (!seed) {
            seed = std::move(candidate);
        }
    }
    if (seed->degenerate()) {
        tr.elitist_fitness.push_back(0.0);
        return *seed;
    }

    Rule parent = *seed;
    // Elitists of the last δ+1 iterations; iteration 0 is the seed.
    std::deque<Rule> window{parent};
    std::size_t best_iteration = 0;
    Rule best = parent;
    tr.elitist_fitness.push_back(parent.fitness);

    for (std::size_t it = 1; it <= params.max_iter; ++it) {
        std::optional<Rule> elitist;
        for (std::size_t c = 0; c < params.lambda; ++c) {
            auto cond = mutate_condition(parent.condition, data, params.mutation_sigma, rng);
            Rule child;
            if (cond.lower == parent.condition.lower && cond.upper == parent.condition.upper) {
                // fit_rule is deterministic, so an unchanged condition refits to the parent.
                child = parent;
                child.fitness = fitness(child);
            } else {
                child = fit_and_score(cond, data, params, fitness);
            }
            if (!elitist || child.fitness > elitist->fitness) {
                elitist = std::move(child);
            }
        }
        tr.iterations = it;
        tr.elitist_fitness.push_back(elitist->fitness);

        if (elitist->fitness > parent.fitness) {
            parent = *elitist;
        }
        if (elitist->fitness > best.fitness) {
            best = *elitist;
            best_iteration = it;
        }

        window.push_back(std::move(*elitist));
        if (window.size() > params.delta + 1) {
            window.pop_front();
        }
        if (window.size() == params.delta + 1) {
            const double old = window.front().fitness;
            const bool dominates = std::all_of(window.begin() + 1, window.end(),
                                               [old](const Rule& r) { return old > r.fitness; });
            if (dominates) {
                tr.stalled = true;
                tr.returned_iteration = it - params.delta;
                return window.front();
            }
        }
    }
    tr.returned_iteration = best_iteration;
    return best;
}

std::vector<Rule> discover_rules(const Dataset& data, std::span<const double> residuals,
                                 const DiscoveryParams& params, Rng& rng)
{
    params.validate();
    std::vector<std::uint64_t> seeds(params.rules_per_phase);
    for (auto& s : seeds) {
        s = split_seed(rng);
    }
    std::vector<Rule> rules;
    rules.reserve(seeds.size());
    for (const auto s : seeds) {
        Rng stream(s);
        Rule rule = discover_rule(data, residuals, params, stream);
        if (!rule.degenerate()) {
            rules.push_back(std::move(rule));
        }
    }
    return rules;
}

} // namespace suprb
