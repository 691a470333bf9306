#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "suprb/dataset.hpp"
#include "suprb/fitness.hpp"
#include "suprb/random.hpp"
#include "suprb/rule.hpp"

namespace suprb {

struct CompositionParams {
    std::size_t population_size = 32;
    std::size_t tournament_k = 3;
    std::size_t crossover_points = 2;
    double crossover_prob = 0.9;
    double mutation_rate = 0.05;
    std::size_t elitists = 2;
    std::size_t generations_per_phase = 64;
    FitnessParams fitness{};

    void validate() const;
};

/// In-sample MSE (training-target mean as fallback), complexity and fitness of `genome`.
[[nodiscard]] SolutionCandidate evaluate_candidate(const Genome& genome, const Pool& pool, const Dataset& data,
                                                   const FitnessParams& params);

/// Per-rule matches and predictions over the training rows, so repeated
/// candidate evaluations skip re-matching. Results are bitwise identical to
/// evaluate_candidate.
class PoolResponses {
public:
    PoolResponses(const Pool& pool, const Dataset& data);

    [[nodiscard]] SolutionCandidate evaluate(const Genome& genome, const FitnessParams& params) const;
    [[nodiscard]] std::size_t pool_size() const { return weights_.size(); }

private:
    const Dataset* data_;
    std::size_t rows_;
    std::vector<double> weights_;
    std::vector<double> predictions_;   // rule-major, rows_ per rule
    std::vector<unsigned char> matched_; // same layout
};

/// Index of the tournament winner among k draws with replacement. Ties go to
/// lower complexity, then to the earlier index.
[[nodiscard]] std::size_t tournament_select(std::span<const SolutionCandidate> population, std::size_t k, Rng& rng);

/// True if `a` ranks before `b`: higher fitness, then lower complexity.
[[nodiscard]] bool ranks_before(const SolutionCandidate& a, const SolutionCandidate& b);

[[nodiscard]] std::pair<Genome, Genome> crossover_npoint(const Genome& a, const Genome& b, std::size_t n_points,
                                                         double crossover_prob, Rng& rng);

[[nodiscard]] Genome mutate_bits(Genome genome, double rate, Rng& rng);

struct CompositionResult {
    SolutionCandidate best;                      ///< best candidate ever evaluated
    std::vector<SolutionCandidate> population;   ///< final population
    std::vector<double> best_fitness_history;    ///< population maximum, initial population then each generation
};

/// Runs generations_per_phase GA steps over subsets of `pool`. A non-empty
/// `warm` population is zero-padded to the current pool size and
/// re-evaluated; otherwise genomes start as Bernoulli(0.5) bits.
[[nodiscard]] CompositionResult compose(const Pool& pool, const Dataset& data, const CompositionParams& params,
                                        std::span<const SolutionCandidate> warm, Rng& rng);

} // namespace suprb
