#pragma once

#include <array>
#include <span>
#include <string>

#include "../errors.hpp"
#include "../features.hpp"
#include "../label.hpp"

namespace hkbc {

namespace detail {

inline std::size_t common_dim(std::span<const SparseVector> X) {
    const std::size_t dim = X.front().dim;
    for (const auto& x : X) {
        if (x.dim != dim) throw UsageError("feature vectors have inconsistent dimensions");
    }
    return dim;
}

inline std::array<std::size_t, 2> class_counts(std::span<const Label> y) {
    std::array<std::size_t, 2> counts{};
    for (const Label l : y) ++counts[label_index(l)];
    return counts;
}

inline void check_training_set(std::span<const SparseVector> X, std::span<const Label> y, std::size_t min_size) {
    if (X.size() != y.size()) throw UsageError("feature and label counts differ");
    if (X.size() < min_size) throw TrainingError("need at least " + std::to_string(min_size) + " training examples");
    const auto counts = class_counts(y);
    if (counts[0] == 0 || counts[1] == 0) throw TrainingError("training data contains a single class");
}

}  // namespace detail

}  // namespace hkbc
