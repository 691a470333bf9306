#include "suprb/fitness.hpp"

#include <cmath>

#include "suprb/errors.hpp"

namespace suprb {

void FitnessParams::validate() const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw UsageError("fitness alpha must be positive");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw UsageError("fitness beta must be positive");
    }
}

double combine(double o1, double o2, double alpha)
{
    if (!(o1 >= 0.0 && o1 <= 1.0) || !(o2 >= 0.0 && o2 <= 1.0)) {
        throw UsageError("fitness objectives must lie in [0, 1]");
    }
    if (!(alpha > 0.0)) {
        throw UsageError("fitness alpha must be positive");
    }
    const double a2 = alpha * alpha;
    const double denom = a2 * o1 + o2;
    if (denom == 0.0) {
        return 0.0;
    }
    return (1.0 + a2) * o1 * o2 / denom;
}

double pseudo_accuracy(double mse, double beta)
{
    if (!(mse >= 0.0)) {
        throw UsageError("mse must be non-negative");
    }
    if (!(beta > 0.0)) {
        throw UsageError("beta must be positive");
    }
    return std::exp(-mse * beta);
}

double volume_share(const IntervalCondition& condition, std::span<const FeatureBound> bounds)
{
    if (bounds.size() != condition.dims()) {
        throw UsageError("condition and feature bounds differ in dimension");
    }
    double volume = 1.0;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double range = bounds[i].range();
        if (range > 0.0) {
            const auto k = static_cast<Eigen::Index>(i);
            volume *= (condition.upper[k] - condition.lower[k]) / range;
        }
    }
    return volume;
}

double rule_fitness(const Rule& rule, std::span<const FeatureBound> bounds, const FitnessParams& params)
{
    if (rule.degenerate() || !std::isfinite(rule.in_sample_error)) {
        return 0.0;
    }
    return combine(pseudo_accuracy(rule.in_sample_error, params.beta), volume_share(rule.condition, bounds),
                   params.alpha);
}

double candidate_fitness(double mse, std::size_t complexity, std::size_t pool_size, const FitnessParams& params)
{
    if (pool_size == 0) {
        throw UsageError("pool size must be positive");
    }
    if (complexity > pool_size) {
        throw UsageError("complexity exceeds pool size");
    }
    const double o1 = pseudo_accuracy(mse, params.beta);
    const double o2 = 1.0 - static_cast<double>(complexity) / static_cast<double>(pool_size);
    return combine(o1, o2, params.alpha);
}

} // namespace suprb
