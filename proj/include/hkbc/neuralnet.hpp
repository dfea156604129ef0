#pragma once

// Word-index embedding network: embedding -> flatten -> one sigmoid unit,
// trained with Adam on binary cross-entropy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "label.hpp"
#include "preprocess.hpp"
#include "random.hpp"

namespace hkbc {

/// Words get indices 1..size in lexicographic order; 0 is padding.
class WordIndex {
public:
    static constexpr std::size_t kCapacityStep = 50;

    WordIndex() = default;

    explicit WordIndex(std::vector<std::string> words) : words_(std::move(words)) {
        std::sort(words_.begin(), words_.end());
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
        for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], static_cast<std::int32_t>(i + 1));
    }

    std::size_t size() const { return words_.size(); }

    /// size rounded up to a multiple of 50.
    std::size_t capacity() const { return round_capacity(words_.size()); }

    static std::size_t round_capacity(std::size_t n) { return (n + kCapacityStep - 1) / kCapacityStep * kCapacityStep; }

    /// 0 for unknown words.
    std::int32_t lookup(const std::string& word) const {
        auto it = index_.find(word);
        return it == index_.end() ? 0 : it->second;
    }

    const std::vector<std::string>& words() const { return words_; }

    friend bool operator==(const WordIndex& a, const WordIndex& b) { return a.words_ == b.words_; }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::int32_t> index_;
};

inline WordIndex build_word_index(std::span<const std::string> corpus) {
    if (corpus.empty()) throw UsageError("cannot build a word index from an empty corpus");
    std::vector<std::string> words;
    for (const auto& doc : corpus) {
        for (const auto t : detail::split_ws(doc)) words.emplace_back(t);
    }
    return WordIndex(std::move(words));
}

/// Token count of the longest document (at least 1).
inline std::size_t longest_sentence(std::span<const std::string> corpus) {
    std::size_t longest = 1;
    for (const auto& doc : corpus) longest = std::max(longest, detail::split_ws(doc).size());
    return longest;
}

using PaddedSequence = std::vector<std::int32_t>;

/// Maps known words to their indices, truncates to max_len keeping the
/// prefix, and right-pads with 0. Unknown words contribute nothing (they
/// would be the padding index), so zeros only ever trail.
inline PaddedSequence encode_pad(const WordIndex& index, std::string_view text, std::size_t max_len) {
    if (max_len == 0) throw UsageError("max_len must be at least 1");
    PaddedSequence seq(max_len, 0);
    std::size_t pos = 0;
    for (const auto t : detail::split_ws(text)) {
        if (pos == max_len) break;
        const auto idx = index.lookup(std::string(t));
        if (idx != 0) seq[pos++] = idx;
    }
    return seq;
}

struct NnConfig {
    std::size_t vocab_capacity = 50;
    std::size_t embed_dim = 200;
    std::size_t max_len = 1;
    double learning_rate = 0.001;
    int epochs = 10;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const {
        if (vocab_capacity < 1) throw UsageError("vocab_capacity must be at least 1");
        if (embed_dim < 1) throw UsageError("embed_dim must be at least 1");
        if (max_len < 1) throw UsageError("max_len must be at least 1");
        if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
        if (epochs < 0) throw UsageError("epochs must be non-negative");
        if (batch_size < 1) throw UsageError("batch_size must be at least 1");
    }

    friend bool operator==(const NnConfig&, const NnConfig&) = default;
};

struct NnParamCount {
    std::uint64_t embedding = 0;    // vocab_capacity * embed_dim
    std::uint64_t flatten_dim = 0;  // max_len * embed_dim
    std::uint64_t dense = 0;        // flatten_dim weights + 1 bias

    std::uint64_t total() const { return embedding + dense; }
};

inline NnParamCount nn_param_count(const NnConfig& cfg) {
    NnParamCount c;
    c.embedding = static_cast<std::uint64_t>(cfg.vocab_capacity) * cfg.embed_dim;
    c.flatten_dim = static_cast<std::uint64_t>(cfg.max_len) * cfg.embed_dim;
    c.dense = c.flatten_dim + 1;
    return c;
}

struct EmbeddingNet {
    NnConfig config;
    std::vector<double> embedding;  // vocab_capacity x embed_dim, row-major; row 0 stays zero
    std::vector<double> dense;      // max_len * embed_dim
    double bias = 0.0;

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(embedding).subspan(r * config.embed_dim, config.embed_dim);
    }

    friend bool operator==(const EmbeddingNet&, const EmbeddingNet&) = default;
};

/// Zero embedding and dense weights of the right shapes.
inline EmbeddingNet make_net(const NnConfig& cfg) {
    cfg.validate();
    EmbeddingNet net;
    net.config = cfg;
    net.embedding.assign(cfg.vocab_capacity * cfg.embed_dim, 0.0);
    net.dense.assign(cfg.max_len * cfg.embed_dim, 0.0);
    return net;
}

namespace detail {

inline void check_sequence(const EmbeddingNet& net, const PaddedSequence& seq) {
    if (seq.size() != net.config.max_len) {
        throw UsageError("sequence length " + std::to_string(seq.size()) + " != max_len " +
                         std::to_string(net.config.max_len));
    }
    for (const auto idx : seq) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= net.config.vocab_capacity) {
            throw UsageError("word index " + std::to_string(idx) + " outside the embedding table");
        }
    }
}

inline double nn_logit(const EmbeddingNet& net, const PaddedSequence& seq) {
    const std::size_t d = net.config.embed_dim;
    double z = net.bias;
    for (std::size_t p = 0; p < seq.size(); ++p) {
        if (seq[p] == 0) continue;  // padding row is zero
        const auto row = net.row(static_cast<std::size_t>(seq[p]));
        const double* w = net.dense.data() + p * d;
        for (std::size_t k = 0; k < d; ++k) z += w[k] * row[k];
    }
    return z;
}

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace detail

inline double nn_forward(const EmbeddingNet& net, const PaddedSequence& seq) {
    detail::check_sequence(net, seq);
    return detail::sigmoid(detail::nn_logit(net, seq));
}

/// OFF iff p > 0.5.
inline Label nn_predict(const EmbeddingNet& net, const PaddedSequence& seq) {
    return nn_forward(net, seq) > 0.5 ? Label::OFF : Label::NOT;
}

struct NnGradients {
    double loss = 0.0;
    std::vector<double> dense;
    double bias = 0.0;
    std::map<std::int32_t, std::vector<double>> embedding_rows;  // referenced non-padding rows only
};

/// Binary cross-entropy (y = 1 for OFF) with p clamped to [1e-12, 1 - 1e-12]
/// inside the log, and its gradients.
inline NnGradients nn_loss_grad(const EmbeddingNet& net, const PaddedSequence& seq, Label label) {
    detail::check_sequence(net, seq);
    const std::size_t d = net.config.embed_dim;
    const double p = detail::sigmoid(detail::nn_logit(net, seq));
    const double y = label == Label::OFF ? 1.0 : 0.0;
    const double pc = std::clamp(p, 1e-12, 1.0 - 1e-12);

    NnGradients g;
    g.loss = -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
    const double dz = p - y;
    g.bias = dz;
    g.dense.assign(net.dense.size(), 0.0);
    for (std::size_t pos = 0; pos < seq.size(); ++pos) {
        const auto r = seq[pos];
        if (r == 0) continue;
        const auto row = net.row(static_cast<std::size_t>(r));
        const double* w = net.dense.data() + pos * d;
        double* gd = g.dense.data() + pos * d;
        auto& gr = g.embedding_rows[r];
        if (gr.empty()) gr.assign(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            gd[k] = dz * row[k];
            gr[k] += dz * w[k];
        }
    }
    return g;
}

struct NnTrainResult {
    EmbeddingNet net;
    std::vector<double> loss_trace;  // mean per-example loss of each epoch
};

/// Embedding rows 1.. drawn uniform(-0.05, 0.05) from the seed, dense layer
/// zero. Mini-batch Adam over a per-epoch seeded shuffle; gradients are
/// averaged over the batch. Row 0 is never updated.
inline NnTrainResult nn_train(std::span<const PaddedSequence> seqs, std::span<const Label> labels, const NnConfig& cfg) {
    cfg.validate();
    if (seqs.size() != labels.size()) throw UsageError("sequence and label counts differ");
    std::array<std::size_t, 2> counts{};
    for (const Label l : labels) ++counts[label_index(l)];
    if (counts[0] == 0 || counts[1] == 0) throw TrainingError("training data contains a single class");

    Rng rng(cfg.seed);
    NnTrainResult result;
    EmbeddingNet& net = result.net;
    net = make_net(cfg);
    const std::size_t d = cfg.embed_dim;
    for (std::size_t i = d; i < net.embedding.size(); ++i) net.embedding[i] = uniform_real(rng, -0.05, 0.05);
    for (const auto& s : seqs) detail::check_sequence(net, s);

    // Adam state. Rows that have never received a gradient keep zero moments
    // and therefore would not move; only touched rows are visited.
    std::vector<double> m_emb(net.embedding.size(), 0.0), v_emb(net.embedding.size(), 0.0);
    std::vector<double> m_dense(net.dense.size(), 0.0), v_dense(net.dense.size(), 0.0);
    double m_bias = 0.0, v_bias = 0.0;
    std::vector<char> touched(cfg.vocab_capacity, 0);
    std::vector<std::int32_t> touched_rows;
    std::uint64_t step = 0;

    const auto adam = [&](double& param, double& m, double& v, double grad, double lr_t) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
        param -= lr_t * m / (std::sqrt(v) + cfg.epsilon);
    };

    std::vector<std::size_t> order(seqs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> g_dense(net.dense.size());
    std::map<std::int32_t, std::vector<double>> g_rows;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        fisher_yates(order, rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0, batch = 0; start < order.size(); start += cfg.batch_size, ++batch) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            const double scale = 1.0 / static_cast<double>(stop - start);
            std::fill(g_dense.begin(), g_dense.end(), 0.0);
            g_rows.clear();
            double g_bias = 0.0;
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t i = order[k];
                auto g = nn_loss_grad(net, seqs[i], labels[i]);
                if (!std::isfinite(g.loss)) {
                    throw NumericError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                                       std::to_string(batch + 1));
                }
                epoch_loss += g.loss;
                g_bias += g.bias * scale;
                for (std::size_t j = 0; j < g_dense.size(); ++j) g_dense[j] += g.dense[j] * scale;
                for (auto& [r, gr] : g.embedding_rows) {
                    auto& acc = g_rows[r];
                    if (acc.empty()) acc.assign(d, 0.0);
                    for (std::size_t j = 0; j < d; ++j) acc[j] += gr[j] * scale;
                }
            }

            ++step;
            const double lr_t = cfg.learning_rate * std::sqrt(1.0 - std::pow(cfg.beta2, static_cast<double>(step))) /
                                (1.0 - std::pow(cfg.beta1, static_cast<double>(step)));
            for (std::size_t j = 0; j < net.dense.size(); ++j) adam(net.dense[j], m_dense[j], v_dense[j], g_dense[j], lr_t);
            adam(net.bias, m_bias, v_bias, g_bias, lr_t);
            for (const auto& [r, gr] : g_rows) {
                if (!touched[static_cast<std::size_t>(r)]) {
                    touched[static_cast<std::size_t>(r)] = 1;
                    touched_rows.push_back(r);
                }
            }
            for (const auto r : touched_rows) {
                auto it = g_rows.find(r);
                const std::size_t base = static_cast<std::size_t>(r) * d;
                for (std::size_t j = 0; j < d; ++j) {
                    const double grad = it == g_rows.end() ? 0.0 : it->second[j];
                    adam(net.embedding[base + j], m_emb[base + j], v_emb[base + j], grad, lr_t);
                }
            }
        }
        const double mean_loss = epoch_loss / static_cast<double>(seqs.size());
        if (!std::isfinite(mean_loss)) throw NumericError("non-finite mean loss at epoch " + std::to_string(epoch + 1));
        result.loss_trace.push_back(mean_loss);
    }
    return result;
}

}  // namespace hkbc
