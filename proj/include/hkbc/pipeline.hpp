#pragma once

// End-to-end text classifier: cleaning + features + model.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corpus.hpp"
#include "ensemble.hpp"
#include "eval.hpp"
#include "features.hpp"
#include "neuralnet.hpp"
#include "preprocess.hpp"

namespace hkbc {

enum class Analyzer : std::uint8_t { word, character, word_char_union };

enum class ModelKind : std::uint8_t { svc, mnb, lr, rfc, ensemble, nn };

inline constexpr std::array<Analyzer, 3> kAnalyzers{Analyzer::word, Analyzer::character, Analyzer::word_char_union};
inline constexpr std::array<ModelKind, 6> kModelKinds{ModelKind::svc, ModelKind::mnb, ModelKind::lr,
                                                      ModelKind::rfc, ModelKind::ensemble, ModelKind::nn};

inline std::string_view to_string(Analyzer a) {
    switch (a) {
        case Analyzer::word: return "word";
        case Analyzer::character: return "char";
        case Analyzer::word_char_union: return "union";
    }
    return "?";
}

inline std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::svc: return "svc";
        case ModelKind::mnb: return "mnb";
        case ModelKind::lr: return "lr";
        case ModelKind::rfc: return "rfc";
        case ModelKind::ensemble: return "ensemble";
        case ModelKind::nn: return "nn";
    }
    return "?";
}

inline std::optional<Analyzer> parse_analyzer(std::string_view s) {
    for (const auto a : kAnalyzers) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

inline std::optional<ModelKind> parse_model_kind(std::string_view s) {
    for (const auto k : kModelKinds) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct PipelineSpec {
    Analyzer analyzer = Analyzer::word_char_union;
    NgramSpec word{NgramMode::word, 1, 2};
    NgramSpec chars{NgramMode::character, 1, 5};
    BlockNorm norm = BlockNorm::per_block;
    ModelKind model = ModelKind::mnb;
    MnbConfig mnb;
    LinearConfig svc{.loss = LinearLoss::squared_hinge};
    LinearConfig lr{.loss = LinearLoss::logistic};
    ForestConfig forest;
    NnConfig nn;  // vocab_capacity and max_len are derived from the training corpus
    PreprocessConfig preprocess;

    std::vector<NgramSpec> ngram_specs() const {
        switch (analyzer) {
            case Analyzer::word: return {word};
            case Analyzer::character: return {chars};
            case Analyzer::word_char_union: return {word, chars};
        }
        return {};
    }
};

using Classifier = std::variant<MnbModel, LinearModel, ForestModel, EnsembleModel>;

inline Label predict(const Classifier& c, const SparseVector& x) {
    return std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, MnbModel>) return predict_mnb(model, x);
            else if constexpr (std::is_same_v<T, LinearModel>) return predict_linear(model, x).label;
            else if constexpr (std::is_same_v<T, ForestModel>) return predict_forest(model, x);
            else return predict_ensemble(model, x);
        },
        c);
}

struct TfidfClassifier {
    TfidfModel vectorizer;
    Classifier model;
};

struct NeuralClassifier {
    WordIndex index;
    EmbeddingNet net;
};

/// A fitted pipeline. Texts passed to predict() are cleaned first.
struct Pipeline {
    ModelKind kind = ModelKind::mnb;
    PreprocessConfig preprocess;
    std::variant<TfidfClassifier, NeuralClassifier> body;

    Label predict_clean(std::string_view cleaned) const {
        if (const auto* t = std::get_if<TfidfClassifier>(&body)) {
            return hkbc::predict(t->model, transform_tfidf(t->vectorizer, cleaned));
        }
        const auto& nn = std::get<NeuralClassifier>(body);
        return nn_predict(nn.net, encode_pad(nn.index, cleaned, nn.net.config.max_len));
    }

    Label predict(std::string_view raw) const { return predict_clean(clean_text(raw, preprocess)); }

    const TfidfModel* vectorizer() const {
        const auto* t = std::get_if<TfidfClassifier>(&body);
        return t ? &t->vectorizer : nullptr;
    }
};

/// Cleans the training texts (dropping empties), then fits vectorizer and
/// model on them alone.
inline Pipeline fit_pipeline(const Dataset& train, const PipelineSpec& spec) {
    const Dataset clean = preprocess_dataset(train, spec.preprocess);
    if (clean.empty()) throw DataError("no training text left after cleaning '" + train.name + "'");
    const auto texts = clean.texts();
    const auto labels = clean.labels();

    Pipeline p;
    p.kind = spec.model;
    p.preprocess = spec.preprocess;
    if (spec.model == ModelKind::nn) {
        NeuralClassifier nn;
        nn.index = build_word_index(texts);
        NnConfig cfg = spec.nn;
        // Rows 0..size must all exist, so a vocabulary that is already a
        // multiple of 50 gets one more block.
        cfg.vocab_capacity = WordIndex::round_capacity(nn.index.size() + 1);
        cfg.max_len = longest_sentence(texts);
        std::vector<PaddedSequence> seqs;
        seqs.reserve(texts.size());
        for (const auto& t : texts) seqs.push_back(encode_pad(nn.index, t, cfg.max_len));
        nn.net = nn_train(seqs, labels, cfg).net;
        p.body = std::move(nn);
        return p;
    }

    const auto specs = spec.ngram_specs();
    TfidfClassifier tc;
    tc.vectorizer = fit_tfidf(texts, specs, spec.norm);
    const auto X = transform_all(tc.vectorizer, texts);
    switch (spec.model) {
        case ModelKind::mnb: tc.model = train_mnb(X, labels, spec.mnb); break;
        case ModelKind::svc: tc.model = train_linear(X, labels, spec.svc); break;
        case ModelKind::lr: tc.model = train_linear(X, labels, spec.lr); break;
        case ModelKind::rfc: tc.model = train_forest(X, labels, spec.forest); break;
        case ModelKind::ensemble:
            tc.model = train_ensemble(X, labels, EnsembleConfig{spec.svc, spec.mnb, spec.lr});
            break;
        case ModelKind::nn: break;
    }
    p.body = std::move(tc);
    return p;
}

inline auto pipeline_trainer(const PipelineSpec& spec) {
    return [spec](const Dataset& train) {
        return [p = fit_pipeline(train, spec)](const std::string& text) { return p.predict(text); };
    };
}

}  // namespace hkbc
