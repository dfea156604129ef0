#pragma once

// Word / character n-gram extraction and smoothed TF-IDF vectorisation.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"

namespace hkbc {

enum class NgramMode : std::uint8_t { word, character };

inline std::string_view to_string(NgramMode m) { return m == NgramMode::word ? "word" : "char"; }

struct NgramSpec {
    static constexpr int kMaxOrder = 10;

    NgramMode mode = NgramMode::word;
    int lo = 1;
    int hi = 1;

    void validate() const {
        if (lo < 1 || hi < lo || hi > kMaxOrder) {
            throw UsageError("invalid n-gram range (" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "): need 1 <= lo <= hi <= " + std::to_string(kMaxOrder));
        }
    }

    friend bool operator==(const NgramSpec&, const NgramSpec&) = default;
};

struct SparseEntry {
    std::size_t index = 0;
    double value = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Indices strictly increasing and below dim.
struct SparseVector {
    std::vector<SparseEntry> entries;
    std::size_t dim = 0;

    double norm() const {
        double s = 0.0;
        for (const auto& e : entries) s += e.value * e.value;
        return std::sqrt(s);
    }

    /// Value at `index`, 0 when absent.
    double at(std::size_t index) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const SparseEntry& e, std::size_t i) { return e.index < i; });
        return it != entries.end() && it->index == index ? it->value : 0.0;
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

inline double dot(std::span<const double> dense, const SparseVector& x) {
    double s = 0.0;
    for (const auto& e : x.entries) s += dense[e.index] * e.value;
    return s;
}

/// Dense term <-> index map; indices follow byte-wise lexicographic order.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Terms need not be sorted or unique.
    explicit Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
        std::sort(terms_.begin(), terms_.end());
        terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
        rebuild_index();
    }

    std::size_t size() const { return terms_.size(); }
    const std::string& term(std::size_t i) const { return terms_.at(i); }
    const std::vector<std::string>& terms() const { return terms_; }

    const std::size_t* find(const std::string& term) const {
        auto it = index_.find(term);
        return it == index_.end() ? nullptr : &it->second;
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

private:
    void rebuild_index() {
        index_.clear();
        index_.reserve(terms_.size());
        for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
    }

    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// How a multi-spec (union) vector is normalised.
enum class BlockNorm : std::uint8_t {
    per_block,  // each spec's block independently to unit L2 norm
    joint,      // the concatenated vector to unit L2 norm
};

struct TfidfModel {
    std::vector<NgramSpec> specs;
    std::vector<Vocabulary> vocabularies;
    std::vector<std::vector<double>> idf;
    std::size_t n_docs = 0;
    BlockNorm norm = BlockNorm::per_block;

    std::size_t dimension() const {
        std::size_t d = 0;
        for (const auto& v : vocabularies) d += v.size();
        return d;
    }

    /// First global index of spec `i`'s block.
    std::size_t offset(std::size_t i) const {
        std::size_t d = 0;
        for (std::size_t k = 0; k < i; ++k) d += vocabularies[k].size();
        return d;
    }
};

/// Maximal runs of ASCII letters of length >= 2.
inline std::vector<std::string> tokenize(std::string_view text) {
    const auto is_letter = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_letter(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && is_letter(text[i])) ++i;
        if (i - start >= 2) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

/// Word n-grams joined with single spaces, ordered by (n, position).
inline std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int lo, int hi) {
    std::vector<std::string> grams;
    const auto count = static_cast<int>(tokens.size());
    for (int n = lo; n <= hi && n <= count; ++n) {
        for (int p = 0; p + n <= count; ++p) {
            std::string g = tokens[p];
            for (int k = 1; k < n; ++k) {
                g += ' ';
                g += tokens[p + k];
            }
            grams.push_back(std::move(g));
        }
    }
    return grams;
}

/// Raw substrings (spaces included), ordered by (n, position).
inline std::vector<std::string> char_ngrams(std::string_view text, int lo, int hi) {
    std::vector<std::string> grams;
    const auto len = static_cast<int>(text.size());
    for (int n = lo; n <= hi && n <= len; ++n) {
        for (int p = 0; p + n <= len; ++p) grams.emplace_back(text.substr(p, n));
    }
    return grams;
}

/// Grams of `text` under `spec`: word mode tokenizes first, char mode reads
/// the text verbatim.
inline std::vector<std::string> extract_ngrams(std::string_view text, const NgramSpec& spec) {
    if (spec.mode == NgramMode::word) {
        const auto tokens = tokenize(text);
        return word_ngrams(tokens, spec.lo, spec.hi);
    }
    return char_ngrams(text, spec.lo, spec.hi);
}

inline double smoothed_idf(std::size_t n_docs, std::size_t df) {
    return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

/// Nearest double to `v` printed with 12 significant digits. Fitted idf
/// values are stored this way so a model file reproduces them exactly.
inline double round_idf(double v) {
    char buf[64];
    const auto end = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12).ptr;
    double out = 0.0;
    std::from_chars(buf, end, out);
    return out;
}

inline TfidfModel fit_tfidf(std::span<const std::string> corpus, std::span<const NgramSpec> specs,
                            BlockNorm norm = BlockNorm::per_block) {
    if (corpus.empty()) throw UsageError("cannot fit a vectorizer on an empty corpus");
    if (specs.empty()) throw UsageError("at least one n-gram spec is required");
    TfidfModel model;
    model.n_docs = corpus.size();
    model.norm = norm;
    for (const auto& spec : specs) {
        spec.validate();
        std::unordered_map<std::string, std::size_t> df;
        for (const auto& doc : corpus) {
            auto grams = extract_ngrams(doc, spec);
            std::sort(grams.begin(), grams.end());
            grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
            for (auto& g : grams) ++df[std::move(g)];
        }
        std::vector<std::string> terms;
        terms.reserve(df.size());
        for (const auto& [term, count] : df) terms.push_back(term);
        Vocabulary vocab(std::move(terms));
        std::vector<double> idf(vocab.size());
        for (std::size_t i = 0; i < vocab.size(); ++i) idf[i] = round_idf(smoothed_idf(model.n_docs, df.at(vocab.term(i))));
        model.specs.push_back(spec);
        model.vocabularies.push_back(std::move(vocab));
        model.idf.push_back(std::move(idf));
    }
    return model;
}

inline void normalize_l2(std::span<SparseEntry> entries) {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * e.value;
    if (s <= 0.0) return;
    const double inv = 1.0 / std::sqrt(s);
    for (auto& e : entries) e.value *= inv;
}

/// Raw counts times idf, L2-normalised per block (or jointly), blocks in
/// spec order. Grams outside the vocabulary are ignored.
inline SparseVector transform_tfidf(const TfidfModel& model, std::string_view text) {
    SparseVector out;
    out.dim = model.dimension();
    std::size_t offset = 0;
    for (std::size_t s = 0; s < model.specs.size(); ++s) {
        const auto& vocab = model.vocabularies[s];
        std::unordered_map<std::size_t, double> counts;
        for (const auto& g : extract_ngrams(text, model.specs[s])) {
            if (const auto* idx = vocab.find(g)) counts[*idx] += 1.0;
        }
        const std::size_t block_start = out.entries.size();
        for (const auto& [idx, count] : counts) out.entries.push_back({offset + idx, count * model.idf[s][idx]});
        std::sort(out.entries.begin() + static_cast<std::ptrdiff_t>(block_start), out.entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
        if (model.norm == BlockNorm::per_block) {
            normalize_l2(std::span(out.entries).subspan(block_start));
        }
        offset += vocab.size();
    }
    if (model.norm == BlockNorm::joint) normalize_l2(out.entries);
    return out;
}

inline std::vector<SparseVector> transform_all(const TfidfModel& model, std::span<const std::string> texts) {
    std::vector<SparseVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(transform_tfidf(model, t));
    return out;
}

/// Fitted idf of `term` in spec `spec_index`; LookupError for unseen terms.
inline double idf_of(const TfidfModel& model, std::size_t spec_index, const std::string& term) {
    if (spec_index >= model.specs.size()) {
        throw UsageError("spec index " + std::to_string(spec_index) + " out of range");
    }
    const auto* idx = model.vocabularies[spec_index].find(term);
    if (!idx) throw LookupError("term '" + term + "' is not in the vocabulary");
    return model.idf[spec_index][*idx];
}

}  // namespace hkbc
