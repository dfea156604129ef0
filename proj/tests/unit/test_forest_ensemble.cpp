#include <gtest/gtest.h>

#include <hkbc/ensemble.hpp>
#include <hkbc/forest.hpp>

#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace hkbc;

namespace {

struct Problem {
    std::vector<SparseVector> X;
    std::vector<Label> y;
};

// OFF exactly when feature 0 exceeds 0.5; the other features are noise.
Problem threshold_problem(std::uint64_t seed, std::size_t n, std::size_t dim) {
    Rng rng(seed);
    auto rows = testsupport::random_rows(rng, n, dim, 0.6);
    Problem p;
    for (auto& r : rows) {
        r[0] = uniform_real(rng, 0.0, 1.0);
        p.y.push_back(r[0] > 0.5 ? Label::OFF : Label::NOT);
    }
    p.X = testsupport::sparse_rows(rows);
    return p;
}

}  // namespace

TEST(Forest, FeaturesPerSplitIsFloorSqrt) {
    EXPECT_EQ(features_per_split(1), 1u);
    EXPECT_EQ(features_per_split(15), 3u);
    EXPECT_EQ(features_per_split(16), 4u);
    EXPECT_EQ(features_per_split(119727), 346u);
}

TEST(Forest, SingleStumpFindsTheThreshold) {
    const auto X = testsupport::sparse_rows({{0.1}, {0.2}, {0.8}, {0.9}});
    const std::vector<Label> y{Label::NOT, Label::NOT, Label::OFF, Label::OFF};
    const auto model = train_forest(X, y, ForestConfig{.n_estimators = 25, .max_depth = 1, .seed = 3});
    for (const auto& t : model.trees) EXPECT_LE(t.depth(), 1);
    EXPECT_EQ(predict_forest(model, testsupport::sparse({0.05})), Label::NOT);
    EXPECT_EQ(predict_forest(model, testsupport::sparse({0.95})), Label::OFF);
}

TEST(Forest, LearnsAThresholdConceptAndRespectsDepth) {
    const auto p = threshold_problem(21, 200, 4);
    const auto model = train_forest(p.X, p.y, ForestConfig{.n_estimators = 30, .max_depth = 6, .seed = 1});
    for (const auto& t : model.trees) EXPECT_LE(t.depth(), 6);
    const auto test = threshold_problem(22, 200, 4);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.X.size(); ++i) correct += predict_forest(model, test.X[i]) == test.y[i];
    EXPECT_GE(correct, 180u);
}

TEST(Forest, LeafCountsSumToBootstrapSize) {
    const auto p = threshold_problem(4, 50, 3);
    const auto model = train_forest(p.X, p.y, ForestConfig{.n_estimators = 5, .seed = 9});
    for (const auto& t : model.trees) {
        const auto& root = t.nodes.front();
        EXPECT_EQ(root.counts[0] + root.counts[1], 50u);
        std::uint32_t leaves = 0;
        for (const auto& n : t.nodes) {
            if (n.is_leaf()) leaves += n.counts[0] + n.counts[1];
        }
        EXPECT_EQ(leaves, 50u);
    }
}

TEST(Forest, DeterministicPerSeed) {
    const auto p = threshold_problem(4, 80, 5);
    const ForestConfig cfg{.n_estimators = 8, .seed = 77};
    const auto a = train_forest(p.X, p.y, cfg), b = train_forest(p.X, p.y, cfg);
    ASSERT_EQ(a.trees.size(), b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        ASSERT_EQ(a.trees[t].nodes.size(), b.trees[t].nodes.size());
        for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
            EXPECT_EQ(a.trees[t].nodes[k].feature, b.trees[t].nodes[k].feature);
            EXPECT_EQ(a.trees[t].nodes[k].threshold, b.trees[t].nodes[k].threshold);
        }
    }
}

TEST(Forest, Validation) {
    const auto X = testsupport::sparse_rows({{1}, {0}});
    const std::vector<Label> y{Label::NOT, Label::OFF};
    EXPECT_THROW(train_forest(X, y, ForestConfig{.n_estimators = 0}), UsageError);
    EXPECT_THROW(train_forest(X, std::vector<Label>{Label::OFF, Label::OFF}), TrainingError);
    const auto model = train_forest(X, y, ForestConfig{.n_estimators = 3});
    EXPECT_THROW(predict_forest(model, testsupport::sparse({1, 2})), UsageError);
}

TEST(Ensemble, HardVoteExhaustiveUpToFive) {
    for (std::size_t len = 1; len <= 5; ++len) {
        for (unsigned mask = 0; mask < (1u << len); ++mask) {
            std::vector<Label> votes;
            for (std::size_t k = 0; k < len; ++k) votes.push_back((mask >> k) & 1 ? Label::OFF : Label::NOT);
            EXPECT_EQ(hard_vote(votes), testsupport::majority_oracle(votes));
        }
    }
    EXPECT_THROW(hard_vote(std::vector<Label>{}), UsageError);
    EXPECT_EQ(hard_vote(std::vector<Label>{Label::OFF, Label::NOT}), Label::NOT);
}

TEST(Ensemble, TrainsThreeMembersAndVotes) {
    const auto p = threshold_problem(30, 120, 4);
    const auto model = train_ensemble(p.X, p.y);
    ASSERT_EQ(model.members.size(), 3u);
    EXPECT_TRUE(std::holds_alternative<LinearModel>(model.members[0]));
    EXPECT_TRUE(std::holds_alternative<MnbModel>(model.members[1]));
    EXPECT_TRUE(std::holds_alternative<LinearModel>(model.members[2]));
    for (const auto& x : p.X) {
        std::vector<Label> votes;
        for (const auto& m : model.members) votes.push_back(predict_member(m, x));
        EXPECT_EQ(predict_ensemble(model, x), testsupport::majority_oracle(votes));
    }
}

TEST(Ensemble, MembersMustAgreeOnDimension) {
    const auto a = testsupport::sparse_rows({{1, 0}, {0, 1}});
    const auto b = testsupport::sparse_rows({{1, 0, 0}, {0, 1, 0}});
    const std::vector<Label> y{Label::NOT, Label::OFF};
    std::vector<MemberModel> members{train_mnb(a, y), train_mnb(b, y)};
    EXPECT_THROW(make_ensemble(members), UsageError);
    EXPECT_THROW(make_ensemble({train_mnb(a, y)}), UsageError);
}
