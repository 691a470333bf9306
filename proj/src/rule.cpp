#include "suprb/rule.hpp"

#include <algorithm>
#include <cmath>

#include "suprb/errors.hpp"

namespace suprb {

void IntervalCondition::clip(std::span<const FeatureBound> bounds)
{
    if (bounds.size() != dims() || static_cast<std::size_t>(upper.size()) != dims()) {
        throw UsageError("condition and feature bounds differ in dimension");
    }
    for (std::size_t i = 0; i < dims(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        lower[k] = std::clamp(lower[k], bounds[i].min, bounds[i].max);
        upper[k] = std::clamp(upper[k], bounds[i].min, bounds[i].max);
    }
}

std::size_t Pool::add(Rule rule)
{
    if (rule.degenerate()) {
        throw UsageError("degenerate rules cannot enter the pool");
    }
    rules_.push_back(std::move(rule));
    return rules_.size() - 1;
}

bool matches(const IntervalCondition& condition, std::span<const double> x)
{
    if (x.size() != condition.dims()) {
        throw UsageError("input dimension does not match condition dimension");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        if (!(condition.lower[k] <= x[i] && x[i] <= condition.upper[k])) {
            return false;
        }
    }
    return true;
}

double predict_rule(const Rule& rule, std::span<const double> x)
{
    const auto& coef = rule.submodel.coefficients;
    if (x.size() != static_cast<std::size_t>(coef.size())) {
        throw UsageError("input dimension does not match submodel dimension");
    }
    double y = rule.submodel.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y += coef[static_cast<Eigen::Index>(i)] * x[i];
    }
    return y;
}

Rule fit_rule(const IntervalCondition& condition, const Dataset& data, double ridge_lambda)
{
    if (condition.dims() != data.dims() || static_cast<std::size_t>(condition.upper.size()) != data.dims()) {
        throw UsageError("condition dimension does not match dataset");
    }
    if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
        throw UsageError("ridge_lambda must be a finite non-negative number");
    }

    const auto dims = static_cast<Eigen::Index>(data.dims());
    Rule rule;
    rule.condition = condition;
    rule.submodel.coefficients = Vector::Zero(dims);

    std::vector<std::size_t> matched;
    for (std::size_t j = 0; j < data.rows(); ++j) {
        if (matches(condition, data.row(j))) {
            matched.push_back(j);
        }
    }
    if (matched.empty()) {
        return rule;
    }

    const auto n = static_cast<Eigen::Index>(matched.size());
    Eigen::MatrixXd x(n, dims);
    Vector y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto j = static_cast<Eigen::Index>(matched[static_cast<std::size_t>(r)]);
        x.row(r) = data.features().row(j);
        y[r] = data.targets()[j];
    }

    // Centering removes the intercept from the penalized problem.
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    x.rowwise() -= x_mean;
    y.array() -= y_mean;

    Vector coef;
    if (ridge_lambda > 0.0) {
        Eigen::MatrixXd gram = x.transpose() * x;
        gram.diagonal().array() += ridge_lambda;
        coef = gram.ldlt().solve(x.transpose() * y);
    } else {
        // Minimum-norm least squares also covers rank-deficient subsamples.
        coef = x.completeOrthogonalDecomposition().solve(y);
    }
    if (!coef.allFinite()) {
        coef.setZero();
    }

    rule.submodel.coefficients = coef;
    rule.submodel.intercept = y_mean - x_mean.dot(coef);
    rule.experience = matched.size();

    double sse = 0.0;
    for (const auto j : matched) {
        const double r = data.target(j) - predict_rule(rule, data.row(j));
        sse += r * r;
    }
    rule.in_sample_error = sse / static_cast<double>(matched.size());
    return rule;
}

double predict_mixed(const Genome& genome, const Pool& pool, std::span<const double> x, double fallback)
{
    if (genome.size() != pool.size()) {
        throw UsageError("genome length does not match pool size");
    }
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < genome.size(); ++k) {
        if (genome[k] && matches(pool[k].condition, x)) {
            const double w = mixing_weight(pool[k]);
            weighted += w * predict_rule(pool[k], x);
            total += w;
        }
    }
    return total > 0.0 ? weighted / total : fallback;
}

std::vector<double> solution_residuals(const Genome& genome, const Pool& pool, const Dataset& data)
{
    std::vector<double> residuals(data.rows());
    for (std::size_t j = 0; j < data.rows(); ++j) {
        residuals[j] = data.target(j) - predict_mixed(genome, pool, data.row(j), data.target_mean());
    }
    return residuals;
}

} // namespace suprb
