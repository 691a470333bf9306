#include "suprb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "suprb/errors.hpp"

namespace suprb {

Dataset::Dataset(Matrix features, Vector targets, std::vector<std::string> feature_names, std::string target_name)
    : features_(std::move(features))
    , targets_(std::move(targets))
    , feature_names_(std::move(feature_names))
    , target_name_(std::move(target_name))
{
    if (features_.rows() == 0 || features_.cols() == 0) {
        throw DataError("dataset needs at least one row and one feature");
    }
    if (features_.rows() != targets_.size()) {
        throw UsageError("feature rows and target length differ");
    }
    if (!feature_names_.empty() && feature_names_.size() != dims()) {
        throw UsageError("feature name count does not match feature dimension");
    }
    for (Eigen::Index j = 0; j < features_.rows(); ++j) {
        for (Eigen::Index i = 0; i < features_.cols(); ++i) {
            if (!std::isfinite(features_(j, i))) {
                std::ostringstream msg;
                msg << "non-finite feature value at row " << j << ", column " << i;
                throw DataError(msg.str());
            }
        }
        if (!std::isfinite(targets_[j])) {
            std::ostringstream msg;
            msg << "non-finite target value at row " << j;
            throw DataError(msg.str());
        }
    }

    bounds_.resize(dims());
    for (std::size_t i = 0; i < dims(); ++i) {
        auto col = features_.col(static_cast<Eigen::Index>(i));
        bounds_[i] = {col.minCoeff(), col.maxCoeff()};
    }

    double sum = 0.0;
    for (Eigen::Index j = 0; j < targets_.size(); ++j) {
        sum += targets_[j];
    }
    target_mean_ = sum / static_cast<double>(targets_.size());
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    Matrix x(static_cast<Eigen::Index>(indices.size()), features_.cols());
    Vector y(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= rows()) {
            throw UsageError("subset index out of range");
        }
        x.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
        y[static_cast<Eigen::Index>(r)] = targets_[static_cast<Eigen::Index>(indices[r])];
    }
    return Dataset(std::move(x), std::move(y), feature_names_, target_name_);
}

} // namespace suprb
