#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include <hkbc/features.hpp>
#include <hkbc/random.hpp>

#include "support/oracles.hpp"

using namespace hkbc;

namespace {
const NgramSpec kWord12{NgramMode::word, 1, 2};
const NgramSpec kChar11{NgramMode::character, 1, 1};
}  // namespace

TEST(Features, TokenizerKeepsLetterRunsOfTwoOrMore) {
    EXPECT_EQ(tokenize("a bb c'dd ee!ff"), (std::vector<std::string>{"bb", "dd", "ee", "ff"}));
    EXPECT_TRUE(tokenize("x y z").empty());
}

TEST(Features, WordNgramOrdering) {
    const std::vector<std::string> toks{"mass", "padam", "kidu"};
    EXPECT_EQ(word_ngrams(toks, 1, 2),
              (std::vector<std::string>{"mass", "padam", "kidu", "mass padam", "padam kidu"}));
    EXPECT_EQ(word_ngrams(toks, 4, 6).size(), 0u);
}

TEST(Features, CharNgramsIncludeSpaces) {
    EXPECT_EQ(char_ngrams("ab c", 2, 3), (std::vector<std::string>{"ab", "b ", " c", "ab ", "b c"}));
    EXPECT_EQ(char_ngrams("ab", 1, 5).size(), 3u);
}

TEST(Features, SpecValidation) {
    EXPECT_THROW((NgramSpec{NgramMode::word, 0, 1}.validate()), UsageError);
    EXPECT_THROW((NgramSpec{NgramMode::word, 3, 2}.validate()), UsageError);
    EXPECT_NO_THROW((NgramSpec{NgramMode::character, 1, 8}.validate()));
}

TEST(Features, SmoothedIdfHandValues) {
    const std::vector<std::string> corpus{"a b", "b"};
    const auto model = fit_tfidf(corpus, std::span(&kChar11, 1));
    EXPECT_NEAR(idf_of(model, 0, "b"), 1.0, 1e-12);
    EXPECT_NEAR(idf_of(model, 0, "a"), std::log(1.5) + 1.0, 1e-10);
    EXPECT_NEAR(idf_of(model, 0, " "), std::log(1.5) + 1.0, 1e-10);
    EXPECT_THROW(idf_of(model, 0, "z"), LookupError);
    EXPECT_THROW(idf_of(model, 3, "a"), UsageError);
}

TEST(Features, VocabularyIsLexicographic) {
    const std::vector<std::string> corpus{"zz aa", "mm"};
    const auto model = fit_tfidf(corpus, std::span(&kWord12, 1));
    EXPECT_EQ(model.vocabularies[0].terms(), (std::vector<std::string>{"aa", "mm", "zz", "zz aa"}));
}

TEST(Features, TransformMatchesDenseOracle) {
    const std::vector<std::string> corpus{"kidu padam", "mass padam mass", "poli", "padam kidu kidu"};
    const NgramSpec spec{NgramMode::character, 1, 3};
    const auto model = fit_tfidf(corpus, std::span(&spec, 1));
    const auto oracle = testsupport::dense_tfidf(
        corpus, [](const std::string& d) { return testsupport::naive_char_grams(d, 1, 3); });
    ASSERT_EQ(model.vocabularies[0].terms(), oracle.vocabulary);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto v = transform_tfidf(model, corpus[d]);
        for (std::size_t t = 0; t < oracle.vocabulary.size(); ++t) EXPECT_NEAR(v.at(t), oracle.rows[d][t], 1e-10);
        EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    }
}

TEST(Features, UnseenGramsAreIgnoredAndEmptyTextIsZero) {
    const std::vector<std::string> corpus{"kidu padam"};
    const auto model = fit_tfidf(corpus, std::span(&kWord12, 1));
    EXPECT_TRUE(transform_tfidf(model, "unknown words only").entries.empty());
    EXPECT_TRUE(transform_tfidf(model, "").entries.empty());
    EXPECT_EQ(transform_tfidf(model, "").dim, model.dimension());
}

TEST(Features, UnionBlocksArePerBlockNormalised) {
    const std::vector<std::string> corpus{"kidu padam", "mass padam"};
    const std::vector<NgramSpec> specs{kWord12, NgramSpec{NgramMode::character, 1, 2}};
    const auto model = fit_tfidf(corpus, specs);
    const auto v = transform_tfidf(model, "kidu padam");
    double word_sq = 0, char_sq = 0;
    for (const auto& e : v.entries) (e.index < model.offset(1) ? word_sq : char_sq) += e.value * e.value;
    EXPECT_NEAR(word_sq, 1.0, 1e-12);
    EXPECT_NEAR(char_sq, 1.0, 1e-12);
    EXPECT_NEAR(v.norm(), std::sqrt(2.0), 1e-12);

    const auto joint = fit_tfidf(corpus, specs, BlockNorm::joint);
    EXPECT_NEAR(transform_tfidf(joint, "kidu padam").norm(), 1.0, 1e-12);
}

TEST(Features, UnionDimensionIsAdditive) {
    const std::vector<std::string> corpus{"super padam", "mass trailer kidu", "padam poli"};
    const NgramSpec chars{NgramMode::character, 1, 5};
    const std::vector<NgramSpec> both{kWord12, chars};
    const auto w = fit_tfidf(corpus, std::span(&kWord12, 1)).dimension();
    const auto c = fit_tfidf(corpus, std::span(&chars, 1)).dimension();
    EXPECT_EQ(fit_tfidf(corpus, both).dimension(), w + c);
}

TEST(Features, EntriesSortedAndNonNegative) {
    const std::vector<std::string> corpus{"b a c", "c c d"};
    const NgramSpec spec{NgramMode::character, 1, 2};
    const auto model = fit_tfidf(corpus, std::span(&spec, 1));
    const auto v = transform_tfidf(model, "c c d b");
    for (std::size_t i = 1; i < v.entries.size(); ++i) EXPECT_LT(v.entries[i - 1].index, v.entries[i].index);
    for (const auto& e : v.entries) EXPECT_GT(e.value, 0.0);
}

TEST(Features, EmptyCorpusIsRejected) {
    const std::vector<std::string> none;
    EXPECT_THROW(fit_tfidf(none, std::span(&kWord12, 1)), UsageError);
}

TEST(Features, TableStyleGrams) {
    const std::vector<std::string> toks{"aa", "amma"};
    EXPECT_EQ(word_ngrams(toks, 1, 2), (std::vector<std::string>{"aa", "amma", "aa amma"}));
    EXPECT_EQ(char_ngrams("da", 1, 2), (std::vector<std::string>{"d", "a", "da"}));
    const auto grams = char_ngrams("aa b", 1, 3);
    EXPECT_NE(std::find(grams.begin(), grams.end(), "aa "), grams.end());
}

TEST(Features, SingleTermDocumentNormalisesToOne) {
    const std::vector<std::string> corpus{"a b", "b"};
    const auto model = fit_tfidf(corpus, std::span(&kChar11, 1));
    const auto v = transform_tfidf(model, "a");
    ASSERT_EQ(v.entries.size(), 1u);
    EXPECT_EQ(model.vocabularies[0].term(v.entries[0].index), "a");
    EXPECT_DOUBLE_EQ(v.entries[0].value, 1.0);
}

TEST(Features, CharGramCountFormula) {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::string s(uniform_index(rng, 21), ' ');
        for (auto& c : s) c = "ab c"[uniform_index(rng, 4)];
        const int lo = 1 + static_cast<int>(uniform_index(rng, 4));
        const int hi = lo + static_cast<int>(uniform_index(rng, 5));
        const int len = static_cast<int>(s.size());
        std::size_t expected = 0;
        for (int n = lo; n <= std::min(hi, len); ++n) expected += static_cast<std::size_t>(len - n + 1);
        EXPECT_EQ(char_ngrams(s, lo, hi).size(), expected);
        EXPECT_EQ(char_ngrams(s, lo, hi), testsupport::naive_char_grams(s, lo, hi));
    }
}

TEST(Features, IdfDecreasesWithDocumentFrequencyAndFitIsDeterministic) {
    const std::vector<std::string> corpus{"aa bb cc", "bb cc", "cc"};
    const NgramSpec w{NgramMode::word, 1, 1};
    const auto model = fit_tfidf(corpus, std::span(&w, 1));
    EXPECT_GT(idf_of(model, 0, "aa"), idf_of(model, 0, "bb"));
    EXPECT_GT(idf_of(model, 0, "bb"), idf_of(model, 0, "cc"));
    const auto again = fit_tfidf(corpus, std::span(&w, 1));
    EXPECT_EQ(again.vocabularies, model.vocabularies);
    EXPECT_EQ(again.idf, model.idf);
}
