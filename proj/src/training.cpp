#include "suprb/training.hpp"

#include <algorithm>
#include <cmath>

#include "suprb/errors.hpp"
#include "suprb/fitness.hpp"

namespace suprb {

void TrainingConfig::validate() const
{
    if (n_phases < 1) {
        throw UsageError("n_phases must be at least 1");
    }
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
        throw UsageError("ridge_lambda must be non-negative");
    }
    if (!(early_stop_tol >= 0.0)) {
        throw UsageError("early_stop_tol must be non-negative");
    }
    DiscoveryParams d = discovery;
    d.ridge_lambda = ridge_lambda;
    d.validate();
    composition.validate();
}

Model fit(const Dataset& data, const TrainingConfig& config, const PhaseObserver& observer)
{
    config.validate();
    DiscoveryParams discovery = config.discovery;
    discovery.ridge_lambda = config.ridge_lambda;

    Model model;
    model.config = config;
    model.config.discovery.ridge_lambda = config.ridge_lambda;
    model.default_prediction = data.target_mean();
    model.feature_bounds = data.feature_bounds();
    model.feature_names = data.feature_names();
    model.target_name = data.target_name();

    Rng rng(config.rng_seed);
    // Before any rule exists every prediction is the default.
    std::vector<double> residuals(data.rows());
    for (std::size_t j = 0; j < data.rows(); ++j) {
        residuals[j] = data.target(j) - model.default_prediction;
    }

    std::vector<SolutionCandidate> population;
    std::size_t stagnant_phases = 0;

    for (std::size_t phase = 0; phase < config.n_phases; ++phase) {
        const auto discovered = discover_rules(data, residuals, discovery, rng);
        for (const auto& rule : discovered) {
            model.pool.add(rule);
        }
        if (model.pool.empty()) {
            continue;
        }

        auto composition = compose(model.pool, data, config.composition, population, rng);
        population = composition.population;

        const double previous = model.history.empty() ? -1.0 : model.history.back().best_fitness;
        model.best = composition.best;
        model.history.push_back({phase, model.best.fitness, model.best.mse, model.best.complexity, model.pool.size()});

        if (observer) {
            observer(PhaseReport{phase, residuals, discovered.size(), &model.pool, &composition});
        }

        residuals = solution_residuals(model.best.genome, model.pool, data);

        if (config.early_stop && model.history.size() >= 2) {
            stagnant_phases = (model.best.fitness - previous < config.early_stop_tol) ? stagnant_phases + 1 : 0;
            if (stagnant_phases >= 2) {
                break;
            }
        }
    }

    if (model.pool.empty()) {
        throw DataError("rule discovery produced no rules in any phase");
    }
    return model;
}

double predict(const Model& model, std::span<const double> x)
{
    if (x.size() != model.dims()) {
        throw UsageError("input dimension does not match the model");
    }
    // Matching sees the input clamped into the training box so rules touching
    // its faces extrapolate; submodels are evaluated at the raw input.
    std::vector<double> clamped(x.begin(), x.end());
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        clamped[i] = std::clamp(clamped[i], model.feature_bounds[i].min, model.feature_bounds[i].max);
    }
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < model.pool.size(); ++k) {
        const Rule& rule = model.pool[k];
        if (model.best.genome[k] && matches(rule.condition, clamped)) {
            const double w = mixing_weight(rule);
            weighted += w * predict_rule(rule, x);
            total += w;
        }
    }
    return total > 0.0 ? weighted / total : model.default_prediction;
}

Vector predict(const Model& model, const Matrix& X)
{
    if (static_cast<std::size_t>(X.cols()) != model.dims()) {
        throw UsageError("input dimension does not match the model");
    }
    Vector out(X.rows());
    for (Eigen::Index j = 0; j < X.rows(); ++j) {
        out[j] = predict(model, std::span<const double>(X.data() + j * X.cols(), static_cast<std::size_t>(X.cols())));
    }
    return out;
}

Score score(const Model& model, const Dataset& data)
{
    if (data.dims() != model.dims()) {
        throw UsageError("dataset dimension does not match the model");
    }
    Score s;
    double sse = 0.0;
    double sst = 0.0;
    for (std::size_t j = 0; j < data.rows(); ++j) {
        const double r = data.target(j) - predict(model, data.row(j));
        const double d = data.target(j) - data.target_mean();
        sse += r * r;
        sst += d * d;
    }
    s.mse = sse / static_cast<double>(data.rows());
    if (sst > 0.0) {
        s.r2 = 1.0 - sse / sst;
    } else {
        s.r2 = sse == 0.0 ? 1.0 : 0.0;
    }
    s.pool_size = model.pool.size();

    double volume = 0.0;
    for (std::size_t k = 0; k < model.best.genome.size(); ++k) {
        if (model.best.genome[k]) {
            ++s.complexity;
            volume += volume_share(model.pool[k].condition, model.feature_bounds);
        }
    }
    s.mean_rule_volume = s.complexity > 0 ? volume / static_cast<double>(s.complexity) : 0.0;
    return s;
}

} // namespace suprb
