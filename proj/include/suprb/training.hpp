#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "suprb/composition.hpp"
#include "suprb/dataset.hpp"
#include "suprb/discovery.hpp"
#include "suprb/rule.hpp"

namespace suprb {

struct TrainingConfig {
    DiscoveryParams discovery{};
    CompositionParams composition{};
    std::size_t n_phases = 8;
    std::uint64_t rng_seed = 0;
    double ridge_lambda = 0.01; ///< overrides discovery.ridge_lambda
    /// Stop once best fitness has improved by less than early_stop_tol in two consecutive phases.
    bool early_stop = false;
    double early_stop_tol = 1e-6;

    void validate() const;
};

struct PhaseMetrics {
    std::size_t phase = 0;
    double best_fitness = 0.0;
    double mse = 0.0;
    std::size_t complexity = 0;
    std::size_t pool_size = 0;
};

struct Model {
    Pool pool;
    SolutionCandidate best;
    double default_prediction = 0.0;
    std::vector<FeatureBound> feature_bounds;
    std::vector<std::string> feature_names;
    std::string target_name;
    TrainingConfig config;
    std::vector<PhaseMetrics> history;

    [[nodiscard]] std::size_t dims() const { return feature_bounds.size(); }
};

/// Reported to an optional observer after each phase's composition step.
struct PhaseReport {
    std::size_t phase = 0;
    std::vector<double> residuals; ///< residuals that seeded this phase's discovery
    std::size_t rules_discovered = 0;
    const Pool* pool = nullptr;
    const CompositionResult* composition = nullptr;
};

using PhaseObserver = std::function<void(const PhaseReport&)>;

/// Alternates rule discovery and solution composition for config.n_phases
/// cycles. Throws DataError if no rule could be discovered at all.
[[nodiscard]] Model fit(const Dataset& data, const TrainingConfig& config, const PhaseObserver& observer = {});

[[nodiscard]] double predict(const Model& model, std::span<const double> x);
[[nodiscard]] Vector predict(const Model& model, const Matrix& X);

struct Score {
    double mse = 0.0;
    double r2 = 0.0;
    std::size_t complexity = 0;
    std::size_t pool_size = 0;
    double mean_rule_volume = 0.0; ///< mean volume share of the selected rules
};

[[nodiscard]] Score score(const Model& model, const Dataset& data);

} // namespace suprb
