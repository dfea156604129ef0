#include <cmath>

#include <gtest/gtest.h>

#include <hkbc/mnb.hpp>

#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace hkbc;
using testsupport::sparse_rows;

TEST(Mnb, MatchesTextbookFormulaOnRandomData) {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rows = testsupport::random_rows(rng, 30, 12, 0.4);
        std::vector<Label> y;
        for (std::size_t i = 0; i < rows.size(); ++i) y.push_back(i % 3 == 0 ? Label::OFF : Label::NOT);
        const double alpha = 0.25 + trial * 0.2;
        const auto model = train_mnb(sparse_rows(rows), y, MnbConfig{alpha});
        const testsupport::BayesOracle oracle(rows, y, alpha);
        for (int c = 0; c < 2; ++c) {
            EXPECT_NEAR(model.log_prior[c], oracle.log_prior[c], 1e-12);
            for (std::size_t t = 0; t < 12; ++t) EXPECT_NEAR(model.log_likelihood[c][t], oracle.log_theta[c][t], 1e-12);
        }
        const auto probe = testsupport::random_rows(rng, 20, 12, 0.5);
        for (const auto& x : probe) {
            const auto s = mnb_scores(model, testsupport::sparse(x));
            EXPECT_NEAR(s[0], oracle.joint(0, x), 1e-9);
            EXPECT_NEAR(s[1], oracle.joint(1, x), 1e-9);
            EXPECT_EQ(predict_mnb(model, testsupport::sparse(x)), oracle.predict(x));
        }
    }
}

TEST(Mnb, TieAndEmptyInputGoToPriorThenNot) {
    // Equal priors, symmetric likelihoods: a zero vector ties.
    const auto X = sparse_rows({{1, 0}, {0, 1}});
    const std::vector<Label> y{Label::NOT, Label::OFF};
    const auto model = train_mnb(X, y);
    EXPECT_EQ(predict_mnb(model, testsupport::sparse({0, 0})), Label::NOT);
    EXPECT_EQ(predict_mnb(model, testsupport::sparse({0, 1})), Label::OFF);
}

TEST(Mnb, RejectsBadInput) {
    const auto X = sparse_rows({{1, 0}, {0, 1}});
    EXPECT_THROW(train_mnb(X, std::vector<Label>{Label::OFF, Label::OFF}), TrainingError);
    EXPECT_THROW(train_mnb(X, std::vector<Label>{Label::NOT, Label::OFF}, MnbConfig{0.0}), UsageError);
    const auto neg = sparse_rows({{-1, 0}, {0, 1}});
    EXPECT_THROW(train_mnb(neg, std::vector<Label>{Label::NOT, Label::OFF}), DataError);
    const auto model = train_mnb(X, std::vector<Label>{Label::NOT, Label::OFF});
    EXPECT_THROW(mnb_scores(model, testsupport::sparse({1, 0, 0})), UsageError);
}

TEST(Mnb, SmoothingKeepsUnseenFeaturesFinite) {
    const auto X = sparse_rows({{1, 0, 0}, {0, 1, 0}});
    const auto model = train_mnb(X, std::vector<Label>{Label::NOT, Label::OFF});
    for (const auto& ll : model.log_likelihood) {
        for (const double v : ll) EXPECT_TRUE(std::isfinite(v));
    }
    // Class NOT: sums (1,0,0), alpha 1, dim 3 -> theta = (2/4, 1/4, 1/4).
    EXPECT_NEAR(model.log_likelihood[0][0], std::log(0.5), 1e-15);
    EXPECT_NEAR(model.log_likelihood[0][2], std::log(0.25), 1e-15);
}
