#pragma once

// Multinomial naive Bayes over non-negative (possibly fractional) features.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "errors.hpp"
#include "features.hpp"
#include "label.hpp"
#include "detail/training_set.hpp"

namespace hkbc {

struct MnbConfig {
    double alpha = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("MNB alpha must be positive");
    }
};

struct MnbModel {
    std::array<double, 2> log_prior{};                   // indexed by label_index
    std::array<std::vector<double>, 2> log_likelihood;  // per class, one entry per feature
    std::size_t dim = 0;
    MnbConfig config;
};

/// log P(c) = ln(n_c / N); log P(t|c) = ln((S_ct + alpha) / (S_c + alpha * dim)),
/// with S_ct the summed weight of feature t over class-c documents.
inline MnbModel train_mnb(std::span<const SparseVector> X, std::span<const Label> y, const MnbConfig& cfg = {}) {
    cfg.validate();
    detail::check_training_set(X, y, 2);
    const std::size_t dim = detail::common_dim(X);

    MnbModel model;
    model.dim = dim;
    model.config = cfg;
    std::array<std::vector<double>, 2> sums{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    for (std::size_t i = 0; i < X.size(); ++i) {
        auto& s = sums[label_index(y[i])];
        for (const auto& e : X[i].entries) {
            if (e.value < 0.0 || !std::isfinite(e.value)) {
                throw DataError("MNB needs non-negative finite features (example " + std::to_string(i) + ")");
            }
            s[e.index] += e.value;
        }
    }
    const auto counts = detail::class_counts(y);
    for (std::size_t c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(X.size()));
        double total = 0.0;
        for (const double v : sums[c]) total += v;
        const double denom = std::log(total + cfg.alpha * static_cast<double>(dim));
        auto& ll = model.log_likelihood[c];
        ll.resize(dim);
        for (std::size_t t = 0; t < dim; ++t) ll[t] = std::log(sums[c][t] + cfg.alpha) - denom;
    }
    return model;
}

/// Unnormalised log posterior per class, indexed by label_index.
inline std::array<double, 2> mnb_scores(const MnbModel& model, const SparseVector& x) {
    if (x.dim != model.dim) throw UsageError("MNB input dimension mismatch");
    std::array<double, 2> scores = model.log_prior;
    for (std::size_t c = 0; c < 2; ++c) scores[c] += dot(model.log_likelihood[c], x);
    return scores;
}

inline Label predict_mnb(const MnbModel& model, const SparseVector& x) {
    const auto s = mnb_scores(model, x);
    return s[1] > s[0] ? Label::OFF : Label::NOT;
}

}  // namespace hkbc
