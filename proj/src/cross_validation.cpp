#include "suprb/cross_validation.hpp"

#include <algorithm>
#include <numeric>

#include "suprb/errors.hpp"

namespace suprb {

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k, Rng& rng)
{
    if (k < 2 || k > n) {
        throw UsageError("fold count must lie in [2, number of rows]");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                        order.begin() + static_cast<std::ptrdiff_t>(start + size));
        start += size;
    }
    return folds;
}

std::vector<FoldResult> cross_validate(const Dataset& data, const TrainingConfig& config, std::size_t k,
                                       std::uint64_t seed)
{
    Rng rng(seed);
    const auto folds = kfold_partition(data.rows(), k, rng);
    std::vector<FoldResult> results;
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) {
                train.insert(train.end(), folds[g].begin(), folds[g].end());
            }
        }
        std::sort(train.begin(), train.end());
        std::vector<std::size_t> test = folds[f];
        std::sort(test.begin(), test.end());

        TrainingConfig fold_config = config;
        fold_config.rng_seed = split_seed(rng);
        const Model model = fit(data.subset(train), fold_config);
        results.push_back({train.size(), test.size(), score(model, data.subset(test))});
    }
    return results;
}

} // namespace suprb
