#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "suprb/dataset.hpp"
#include "suprb/training.hpp"

namespace suprb {

/// Shuffled partition of [0, n) into k disjoint folds whose sizes differ by
/// at most one; the first n % k folds hold the extra row.
[[nodiscard]] std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k, Rng& rng);

struct FoldResult {
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    Score test;
};

/// Trains on k-1 folds and scores on the held-out one, for every fold. Each
/// fold gets its own rng seed derived from `seed`.
[[nodiscard]] std::vector<FoldResult> cross_validate(const Dataset& data, const TrainingConfig& config, std::size_t k,
                                                     std::uint64_t seed);

} // namespace suprb
