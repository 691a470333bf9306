#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "suprb/dataset.hpp"
#include "suprb/fitness.hpp"
#include "suprb/random.hpp"
#include "suprb/rule.hpp"

namespace suprb {

/// Parameters of the (1+λ) evolution strategy that discovers single rules.
struct DiscoveryParams {
    std::size_t lambda = 20;          ///< children per iteration
    std::size_t delta = 10;           ///< elitist stall window
    double mutation_sigma = 0.05;     ///< halfnormal mutation scale, fraction of each feature's range
    double init_sigma = 0.1;          ///< halfnormal scale of the initial bounds around the seed example
    std::size_t rules_per_phase = 8;
    std::size_t max_iter = 500;
    std::size_t max_retries = 10;     ///< reseeds allowed when the seed rule is degenerate
    double ridge_lambda = 0.01;
    FitnessParams fitness{0.2, 2.0};

    void validate() const;
};

using RuleFitnessFn = std::function<double(const Rule&)>;

/// What happened inside one discover_rule run.
struct DiscoveryTrace {
    std::size_t iterations = 0;           ///< post-seed iterations executed
    std::vector<double> elitist_fitness;  ///< index 0 is the seed rule, then one per iteration
    std::size_t returned_iteration = 0;   ///< index into elitist_fitness of the returned rule
    bool stalled = false;                 ///< stopped by the δ rule rather than max_iter
};

/// Roulette-wheel pick proportional to the squared residual; uniform when
/// every residual is zero.
[[nodiscard]] std::size_t select_seed_example(const Dataset& data, std::span<const double> residuals, Rng& rng);

[[nodiscard]] IntervalCondition initial_condition(std::span<const double> x, const Dataset& data, double sigma_init,
                                                  Rng& rng);

/// Growth-only mutation: lower bounds move down, upper bounds move up.
[[nodiscard]] IntervalCondition mutate_condition(const IntervalCondition& parent, const Dataset& data, double sigma,
                                                 Rng& rng);

[[nodiscard]] Rule discover_rule(const Dataset& data, std::span<const double> residuals,
                                 const DiscoveryParams& params, Rng& rng, DiscoveryTrace* trace = nullptr);

/// Same as above with a caller-supplied fitness. The function is invoked
/// once per fitted rule in a fixed order: the seed, then λ children per iteration.
[[nodiscard]] Rule discover_rule(const Dataset& data, std::span<const double> residuals,
                                 const DiscoveryParams& params, Rng& rng, const RuleFitnessFn& fitness,
                                 DiscoveryTrace* trace = nullptr);

/// rules_per_phase independent discover_rule runs, each on its own stream
/// split from `rng`. Degenerate results are dropped.
[[nodiscard]] std::vector<Rule> discover_rules(const Dataset& data, std::span<const double> residuals,
                                               const DiscoveryParams& params, Rng& rng);

} // namespace suprb
