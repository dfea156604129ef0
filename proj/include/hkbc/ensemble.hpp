#pragma once

// Hard-voting ensemble over the classical models.

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "forest.hpp"
#include "linear.hpp"
#include "mnb.hpp"

namespace hkbc {

/// Label with the most votes; ties go to NOT.
inline Label hard_vote(std::span<const Label> predictions) {
    if (predictions.empty()) throw UsageError("hard_vote needs at least one prediction");
    std::size_t off = 0;
    for (const Label l : predictions) off += l == Label::OFF;
    return majority(predictions.size() - off, off);
}

using MemberModel = std::variant<LinearModel, MnbModel, ForestModel>;

inline std::size_t member_dim(const MemberModel& m) {
    return std::visit(
        [](const auto& model) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(model)>, LinearModel>) {
                return model.dim();
            } else {
                return model.dim;
            }
        },
        m);
}

inline Label predict_member(const MemberModel& m, const SparseVector& x) {
    return std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                return predict_linear(model, x).label;
            } else if constexpr (std::is_same_v<T, MnbModel>) {
                return predict_mnb(model, x);
            } else {
                return predict_forest(model, x);
            }
        },
        m);
}

struct EnsembleConfig {
    LinearConfig svm{.loss = LinearLoss::squared_hinge};
    MnbConfig mnb;
    LinearConfig logistic{.loss = LinearLoss::logistic};
};

/// Member order is significant only for reporting; the vote is symmetric.
struct EnsembleModel {
    std::vector<MemberModel> members;

    std::size_t dim() const { return members.empty() ? 0 : member_dim(members.front()); }
};

inline EnsembleModel make_ensemble(std::vector<MemberModel> members) {
    if (members.size() < 2) throw UsageError("an ensemble needs at least two members");
    const std::size_t dim = member_dim(members.front());
    for (const auto& m : members) {
        if (member_dim(m) != dim) throw UsageError("ensemble members disagree on feature dimension");
    }
    return EnsembleModel{std::move(members)};
}

/// Trains the default members: linear SVC, MNB, logistic regression.
inline EnsembleModel train_ensemble(std::span<const SparseVector> X, std::span<const Label> y,
                                    const EnsembleConfig& cfg = {}) {
    std::vector<MemberModel> members;
    members.emplace_back(train_linear(X, y, cfg.svm));
    members.emplace_back(train_mnb(X, y, cfg.mnb));
    members.emplace_back(train_linear(X, y, cfg.logistic));
    return make_ensemble(std::move(members));
}

inline Label predict_ensemble(const EnsembleModel& model, const SparseVector& x) {
    std::vector<Label> votes;
    votes.reserve(model.members.size());
    for (const auto& m : model.members) votes.push_back(predict_member(m, x));
    return hard_vote(votes);
}

}  // namespace hkbc
