#pragma once

// Noise removal for code-mixed social-media text.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "errors.hpp"
#include "utf8.hpp"

namespace hkbc {

/// Built-in English stopword list; identical to data/stopwords_en.txt.
inline const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words{
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then", "once", "here", "there",
    "when", "where", "why", "how", "all", "any", "both", "each", "few", "more", "most", "other",
    "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s",
    "t", "can", "will", "just", "don", "don't", "should", "should've", "now", "d", "ll", "m", "o",
    "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn", "didn't", "doesn",
    "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma",
    "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
    "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
    };
    return words;
}

struct PreprocessConfig {
    bool remove_stopwords = true;
    std::set<std::string> stopwords = default_stopwords();
    bool strip_social_markers = true;
    bool lowercase = true;

    /// Throws UsageError unless every stopword is non-empty lowercase ASCII.
    void validate() const {
        for (const auto& w : stopwords) {
            if (w.empty()) throw UsageError("stopword list contains an empty entry");
            for (const char c : w) {
                const auto u = static_cast<unsigned char>(c);
                if (u > 0x7F || (c >= 'A' && c <= 'Z') || c == ' ' || c == '\t') {
                    throw UsageError("stopword '" + w + "' is not a lowercase ASCII word");
                }
            }
        }
    }

    friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

namespace detail {

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && !is_ascii_space(text[i])) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

inline std::string join(const std::vector<std::string_view>& tokens) {
    std::string out;
    for (const auto t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace detail

/// Reads a stopword file: one word per line, '#' starts a comment line.
inline std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in || std::filesystem::is_directory(path)) throw IoError("cannot open stopword list '" + path.string() + "'");
    std::set<std::string> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = detail::split_ws(line);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        if (tokens.size() != 1) {
            throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected one word");
        }
        words.emplace(tokens.front());
    }
    PreprocessConfig probe;
    probe.stopwords = words;
    try {
        probe.validate();
    } catch (const UsageError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return words;
}

/// Deletes every whitespace-delimited token that begins with '@' or '#'.
inline std::string remove_social_markers(std::string_view text) {
    auto tokens = detail::split_ws(text);
    std::erase_if(tokens, [](std::string_view t) { return t.front() == '@' || t.front() == '#'; });
    return detail::join(tokens);
}

/// Replaces each code point above U+007F with one space. Bytes that are not
/// part of a valid UTF-8 sequence are replaced one space per byte.
inline std::string strip_non_ascii(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        const auto b = static_cast<unsigned char>(text[i]);
        if (b < 0x80) {
            out += text[i++];
            continue;
        }
        const std::size_t len = utf8::sequence_length(text, i);
        out += ' ';
        i += len == 0 ? 1 : len;
    }
    return out;
}

inline std::string remove_stopwords(std::string_view text, const std::set<std::string>& stopwords) {
    auto tokens = detail::split_ws(text);
    std::erase_if(tokens, [&](std::string_view t) { return stopwords.contains(std::string(t)); });
    return detail::join(tokens);
}

/// Full cleaning pipeline, in this order: social markers, non-ASCII, digits,
/// the characters @#%$^()- (and ASCII controls), lowercase, stopwords,
/// whitespace collapse.
/// Null-like results ("nan", "null") become "".
inline std::string clean_text(std::string_view text, const PreprocessConfig& cfg) {
    std::string s = cfg.strip_social_markers ? remove_social_markers(text) : std::string(text);
    s = strip_non_ascii(s);
    std::erase_if(s, [](char c) { return c >= '0' && c <= '9'; });
    for (auto& c : s) {
        switch (c) {
            case '@': case '#': case '%': case '$': case '^': case '(': case ')': case '-':
                c = ' ';
                break;
            default:
                if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) c = ' ';  // control characters
                break;
        }
    }
    if (cfg.lowercase) {
        for (auto& c : s) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
    }
    std::string out = cfg.remove_stopwords ? remove_stopwords(s, cfg.stopwords) : detail::join(detail::split_ws(s));
    std::string folded = out;
    for (auto& c : folded) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (folded == "nan" || folded == "null") return {};
    return out;
}

/// Cleans every record's text and drops records whose cleaned text is empty.
inline Dataset preprocess_dataset(const Dataset& ds, const PreprocessConfig& cfg) {
    cfg.validate();
    Dataset out;
    out.name = ds.name;
    out.labeled = ds.labeled;
    out.records.reserve(ds.size());
    for (const auto& r : ds.records) {
        std::string cleaned = clean_text(r.text, cfg);
        if (cleaned.empty()) continue;
        out.records.push_back(Record{r.id, std::move(cleaned), r.label});
    }
    return out;
}

}  // namespace hkbc
