#pragma once

#include <cstddef>
#include <span>

#include "suprb/dataset.hpp"
#include "suprb/rule.hpp"

namespace suprb {

struct FitnessParams {
    double alpha = 0.5; ///< weighs the first objective against the second
    double beta = 2.0;  ///< slope of the pseudo-accuracy

    void validate() const;
};

/// Weighted harmonic-style combination of two objectives in [0, 1]:
/// (1 + α²)·o1·o2 / (α²·o1 + o2), with 0 when both objectives are 0.
[[nodiscard]] double combine(double o1, double o2, double alpha);

/// exp(-mse·β), squashing an error into (0, 1].
[[nodiscard]] double pseudo_accuracy(double mse, double beta);

/// Fraction of the observed feature box covered by `condition`.
/// Constant features contribute a factor of 1.
[[nodiscard]] double volume_share(const IntervalCondition& condition, std::span<const FeatureBound> bounds);

[[nodiscard]] double rule_fitness(const Rule& rule, std::span<const FeatureBound> bounds, const FitnessParams& params);

/// Fitness over error and the number of selected rules, the latter
/// normalized as 1 - complexity/pool_size.
[[nodiscard]] double candidate_fitness(double mse, std::size_t complexity, std::size_t pool_size,
                                       const FitnessParams& params);

} // namespace suprb
