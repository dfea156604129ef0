#pragma once

// Random forest of Gini-split decision trees over sparse features.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "detail/training_set.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "label.hpp"
#include "random.hpp"

namespace hkbc {

struct ForestConfig {
    int n_estimators = 100;
    int max_depth = 16;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_estimators < 1) throw UsageError("n_estimators must be at least 1");
        if (max_depth < 1) throw UsageError("max_depth must be at least 1");
    }
};

/// Internal nodes route x[feature] <= threshold to `left`. Leaves have
/// feature == -1 and carry (bootstrap-weighted) class counts.
struct TreeNode {
    std::int64_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::array<std::uint32_t, 2> counts{};

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    int depth() const { return depth_from(0); }

    Label vote(const SparseVector& x) const {
        std::size_t i = 0;
        while (!nodes[i].is_leaf()) {
            const auto& n = nodes[i];
            i = static_cast<std::size_t>(x.at(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right);
        }
        return majority(nodes[i].counts[0], nodes[i].counts[1]);
    }

private:
    int depth_from(std::size_t i) const {
        const auto& n = nodes[i];
        if (n.is_leaf()) return 0;
        return 1 + std::max(depth_from(static_cast<std::size_t>(n.left)), depth_from(static_cast<std::size_t>(n.right)));
    }
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::size_t dim = 0;
    ForestConfig config;
};

inline std::size_t features_per_split(std::size_t dim) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dim)))));
}

namespace detail {

inline double gini(double n0, double n1) {
    const double n = n0 + n1;
    if (n <= 0.0) return 0.0;
    const double p0 = n0 / n, p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitCandidate {
    double gain = 0.0;
    std::int64_t feature = -1;
    double threshold = 0.0;
};

// One observed value of a feature within a node, with bootstrap weight.
struct Observation {
    double value;
    std::uint32_t weight;
    Label label;
};

class TreeBuilder {
public:
    TreeBuilder(std::span<const SparseVector> X, std::span<const Label> y, const ForestConfig& cfg, std::size_t dim,
                std::uint64_t seed)
        : X_(X), y_(y), cfg_(cfg), dim_(dim), quota_(features_per_split(dim)), rng_(seed) {}

    DecisionTree build(const std::vector<std::uint32_t>& multiplicity) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < multiplicity.size(); ++i) {
            if (multiplicity[i] > 0) members.push_back(i);
        }
        multiplicity_ = &multiplicity;
        tree_.nodes.clear();
        grow(members, 0);
        return std::move(tree_);
    }

private:
    std::int32_t grow(const std::vector<std::size_t>& members, int depth) {
        const auto id = static_cast<std::int32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        std::array<std::uint32_t, 2> counts{};
        for (const auto i : members) counts[label_index(y_[i])] += (*multiplicity_)[i];
        tree_.nodes[id].counts = counts;

        if (counts[0] == 0 || counts[1] == 0 || depth >= cfg_.max_depth || counts[0] + counts[1] < 2) return id;

        const SplitCandidate best = find_split(members, counts);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (const auto i : members) {
            (X_[i].at(static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
        }
        tree_.nodes[id].feature = best.feature;
        tree_.nodes[id].threshold = best.threshold;
        const auto l = grow(left, depth + 1);
        const auto r = grow(right, depth + 1);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    // Visits the node's non-constant features in random order and scores
    // the first `quota_` of them. Features that are zero for every member
    // are constant and never considered.
    SplitCandidate find_split(const std::vector<std::size_t>& members, const std::array<std::uint32_t, 2>& counts) {
        // Bucket the members' nonzero entries by feature (counting sort).
        std::vector<std::size_t> candidates;
        for (const auto i : members) {
            for (const auto& e : X_[i].entries) {
                if (e.value == 0.0) continue;
                if (count_[e.index]++ == 0) candidates.push_back(e.index);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        std::size_t offset = 0;
        for (const auto f : candidates) {
            start_[f] = offset;
            offset += count_[f];
        }
        flat_.resize(offset);
        for (const auto i : members) {
            for (const auto& e : X_[i].entries) {
                if (e.value != 0.0) flat_[start_[e.index]++] = {e.value, (*multiplicity_)[i], y_[i]};
            }
        }
        // start_[f] now points one past the bucket of f.

        const double total = static_cast<double>(counts[0] + counts[1]);
        const double parent = gini(counts[0], counts[1]);
        SplitCandidate best;
        std::size_t scored = 0;
        std::vector<Observation> obs;
        for (std::size_t k = 0; k < candidates.size() && scored < quota_; ++k) {
            const auto j = k + static_cast<std::size_t>(uniform_index(rng_, candidates.size() - k));
            std::swap(candidates[k], candidates[j]);
            const std::size_t f = candidates[k];
            obs.assign(flat_.begin() + static_cast<std::ptrdiff_t>(start_[f] - count_[f]),
                       flat_.begin() + static_cast<std::ptrdiff_t>(start_[f]));

            std::array<double, 2> nonzero{};
            for (const auto& o : obs) nonzero[label_index(o.label)] += o.weight;
            const std::array<double, 2> zeros{counts[0] - nonzero[0], counts[1] - nonzero[1]};
            if (zeros[0] + zeros[1] > 0.0) obs.push_back({0.0, 0, Label::NOT});  // stands for all zero rows
            std::sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) { return a.value < b.value; });
            if (obs.front().value == obs.back().value) continue;  // constant within node
            ++scored;

            std::array<double, 2> left{};
            for (std::size_t p = 0; p + 1 < obs.size(); ++p) {
                if (obs[p].value == 0.0 && obs[p].weight == 0) {
                    left[0] += zeros[0];
                    left[1] += zeros[1];
                } else {
                    left[label_index(obs[p].label)] += obs[p].weight;
                }
                if (obs[p + 1].value == obs[p].value) continue;
                const std::array<double, 2> right{counts[0] - left[0], counts[1] - left[1]};
                const double nl = left[0] + left[1], nr = right[0] + right[1];
                const double child = (nl * gini(left[0], left[1]) + nr * gini(right[0], right[1])) / total;
                const double gain = parent - child;
                if (gain > best.gain + 1e-12) {
                    double mid = obs[p].value + (obs[p + 1].value - obs[p].value) / 2.0;
                    if (!(mid < obs[p + 1].value)) mid = obs[p].value;
                    best = {gain, static_cast<std::int64_t>(f), mid};
                }
            }
        }
        for (const auto f : candidates) count_[f] = 0;
        return best;
    }

    std::span<const SparseVector> X_;
    std::span<const Label> y_;
    const ForestConfig& cfg_;
    std::size_t dim_;
    std::size_t quota_;
    Rng rng_;
    const std::vector<std::uint32_t>* multiplicity_ = nullptr;
    DecisionTree tree_;
    std::vector<std::size_t> count_ = std::vector<std::size_t>(dim_, 0);  // per-feature scratch, all zero between calls
    std::vector<std::size_t> start_ = std::vector<std::size_t>(dim_, 0);
    std::vector<Observation> flat_;
};

}  // namespace detail

/// Each tree sees a size-N bootstrap sample and splits on the best Gini
/// threshold (midpoint of adjacent observed values) among floor(sqrt(dim))
/// randomly drawn non-constant features. Tree t uses derive_seed(seed, t),
/// so trees are independent of one another and of training order.
inline ForestModel train_forest(std::span<const SparseVector> X, std::span<const Label> y, const ForestConfig& cfg = {}) {
    cfg.validate();
    detail::check_training_set(X, y, 2);
    ForestModel model;
    model.dim = detail::common_dim(X);
    model.config = cfg;
    model.trees.reserve(static_cast<std::size_t>(cfg.n_estimators));
    const std::size_t n = X.size();
    for (int t = 0; t < cfg.n_estimators; ++t) {
        const std::uint64_t tree_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
        Rng bootstrap_rng(tree_seed);
        std::vector<std::uint32_t> multiplicity(n, 0);
        for (std::size_t k = 0; k < n; ++k) ++multiplicity[uniform_index(bootstrap_rng, n)];
        detail::TreeBuilder builder(X, y, cfg, model.dim, derive_seed(tree_seed, 1));
        model.trees.push_back(builder.build(multiplicity));
    }
    return model;
}

/// Majority of tree votes; ties go to NOT.
inline Label predict_forest(const ForestModel& model, const SparseVector& x) {
    if (x.dim != model.dim) throw UsageError("forest input dimension mismatch");
    std::size_t off = 0;
    for (const auto& tree : model.trees) off += tree.vote(x) == Label::OFF;
    return majority(model.trees.size() - off, off);
}

}  // namespace hkbc
