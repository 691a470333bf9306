#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace suprb {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct FeatureBound {
    double min = 0.0;
    double max = 0.0;

    [[nodiscard]] double range() const { return max - min; }
    bool operator==(const FeatureBound&) const = default;
};

/// Training data: an N×D feature matrix, N targets and the per-feature
/// observed bounds. Immutable once built.
class Dataset {
public:
    /// Validates shape and finiteness and computes feature bounds.
    /// Throws DataError on empty or non-finite input, UsageError on shape mismatch.
    Dataset(Matrix features, Vector targets,
            std::vector<std::string> feature_names = {}, std::string target_name = {});

    [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(features_.rows()); }
    [[nodiscard]] std::size_t dims() const { return static_cast<std::size_t>(features_.cols()); }

    [[nodiscard]] const Matrix& features() const { return features_; }
    [[nodiscard]] const Vector& targets() const { return targets_; }
    [[nodiscard]] std::span<const double> row(std::size_t j) const
    {
        return {features_.data() + j * dims(), dims()};
    }
    [[nodiscard]] double target(std::size_t j) const { return targets_[static_cast<Eigen::Index>(j)]; }
    [[nodiscard]] const std::vector<FeatureBound>& feature_bounds() const { return bounds_; }
    [[nodiscard]] double target_mean() const { return target_mean_; }

    [[nodiscard]] const std::vector<std::string>& feature_names() const { return feature_names_; }
    [[nodiscard]] const std::string& target_name() const { return target_name_; }

    /// Rows picked by index, in the given order. Bounds are recomputed.
    [[nodiscard]] Dataset subset(std::span<const std::size_t> indices) const;

private:
    Matrix features_;
    Vector targets_;
    std::vector<FeatureBound> bounds_;
    double target_mean_ = 0.0;
    std::vector<std::string> feature_names_;
    std::string target_name_;
};

} // namespace suprb
