#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "suprb/dataset.hpp"

namespace suprb {

/// Closed hyperrectangle [lower, upper] over the feature space.
struct IntervalCondition {
    Vector lower;
    Vector upper;

    [[nodiscard]] std::size_t dims() const { return static_cast<std::size_t>(lower.size()); }
    /// Clips both bounds into the observed feature bounds.
    void clip(std::span<const FeatureBound> bounds);
};

struct LinearSubmodel {
    Vector coefficients;
    double intercept = 0.0;
};

struct Rule {
    IntervalCondition condition;
    LinearSubmodel submodel;
    std::size_t experience = 0;
    double in_sample_error = std::numeric_limits<double>::infinity();
    double fitness = 0.0;

    /// A rule that matched no training example when it was fitted.
    [[nodiscard]] bool degenerate() const { return experience == 0; }
};

/// Append-only rule archive. Indices are stable, rules are never modified.
class Pool {
public:
    /// Throws UsageError for degenerate rules.
    std::size_t add(Rule rule);

    [[nodiscard]] std::size_t size() const { return rules_.size(); }
    [[nodiscard]] bool empty() const { return rules_.empty(); }
    [[nodiscard]] const Rule& operator[](std::size_t i) const { return rules_[i]; }
    [[nodiscard]] const Rule& at(std::size_t i) const { return rules_.at(i); }
    [[nodiscard]] auto begin() const { return rules_.cbegin(); }
    [[nodiscard]] auto end() const { return rules_.cend(); }

private:
    std::vector<Rule> rules_;
};

/// One bit per pool rule; bit k set means rule k is part of the solution.
using Genome = std::vector<bool>;

struct SolutionCandidate {
    Genome genome;
    double mse = 0.0;
    std::size_t complexity = 0;
    double fitness = 0.0;
};

/// Offset keeping mixing weights finite for perfectly fitted rules.
inline constexpr double kMixingEpsilon = 1e-6;

[[nodiscard]] bool matches(const IntervalCondition& condition, std::span<const double> x);

/// Ridge fit (unpenalized intercept) on the examples matched by `condition`.
/// An empty match yields a degenerate rule instead of throwing.
[[nodiscard]] Rule fit_rule(const IntervalCondition& condition, const Dataset& data, double ridge_lambda);

[[nodiscard]] double predict_rule(const Rule& rule, std::span<const double> x);

[[nodiscard]] inline double mixing_weight(const Rule& rule)
{
    return static_cast<double>(rule.experience) / (rule.in_sample_error + kMixingEpsilon);
}

/// Weighted mean of the matching selected rules' predictions, or
/// `fallback` when no selected rule matches.
[[nodiscard]] double predict_mixed(const Genome& genome, const Pool& pool, std::span<const double> x,
                                   double fallback);

[[nodiscard]] inline double predict_mixed(const SolutionCandidate& candidate, const Pool& pool,
                                          std::span<const double> x, double fallback)
{
    return predict_mixed(candidate.genome, pool, x, fallback);
}

/// targets - predictions, with the training-target mean as fallback.
[[nodiscard]] std::vector<double> solution_residuals(const Genome& genome, const Pool& pool, const Dataset& data);

} // namespace suprb
