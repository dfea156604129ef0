#pragma once

// Seeded synthetic code-mix corpus. Offensive records contain at least one
// word from a planted keyword family that never appears in NOT records, so
// the two classes are separable by construction.

#include <cstdint>
#include <string>
#include <vector>

#include <hkbc/corpus.hpp>
#include <hkbc/random.hpp>

namespace testsupport {

inline const std::vector<std::string>& neutral_words() {
    static const std::vector<std::string> words{
        "padam", "kollam", "chetta", "ettan", "mass", "trailer", "poli", "adipoli", "kidu", "fans",
        "waiting", "release", "nammude", "ivide", "machane", "super", "scene", "music", "bgm", "lalettan",
        "mammukka", "theatre", "kaanan", "pwoli", "ente", "ningal", "vannu", "pokunnu", "katta", "item",
        "romba", "nalla", "semma", "thalaivar", "vera", "level", "padathil", "paatu", "kettu", "ishtam",
        "climax", "story", "director", "hero", "katha", "sooper", "nanban", "thala", "anna", "veriyan"};
    return words;
}

/// The planted family; shares the stem "thox", which no neutral word contains.
inline const std::vector<std::string>& offensive_words() {
    static const std::vector<std::string> words{"thoxa", "thoxan", "thoxam", "thoxikal", "thoxu"};
    return words;
}

struct SyntheticOptions {
    std::size_t size = 600;
    double offensive_share = 0.5;
    std::size_t min_words = 4;
    std::size_t max_words = 10;
    bool noise = true;  // mentions, hashtags, digits, emoji
};

inline std::string pick(const std::vector<std::string>& from, hkbc::Rng& rng) {
    return from[hkbc::uniform_index(rng, from.size())];
}

inline hkbc::Dataset synthetic_corpus(std::uint64_t seed, const SyntheticOptions& opt = {}) {
    hkbc::Rng rng(seed);
    hkbc::Dataset ds;
    ds.name = "synthetic";
    ds.labeled = true;
    const auto n_off = static_cast<std::size_t>(opt.offensive_share * static_cast<double>(opt.size) + 0.5);
    for (std::size_t i = 0; i < opt.size; ++i) {
        const bool off = i < n_off;
        const std::size_t len = opt.min_words + hkbc::uniform_index(rng, opt.max_words - opt.min_words + 1);
        std::vector<std::string> words;
        for (std::size_t k = 0; k < len; ++k) words.push_back(pick(neutral_words(), rng));
        if (off) {
            const std::size_t planted = 1 + hkbc::uniform_index(rng, 2);
            for (std::size_t k = 0; k < planted; ++k) {
                words[hkbc::uniform_index(rng, words.size())] = pick(offensive_words(), rng);
            }
        }
        std::string text;
        if (opt.noise && hkbc::uniform_index(rng, 3) == 0) text += "@user" + std::to_string(i) + " ";
        for (const auto& w : words) {
            if (!text.empty()) text += ' ';
            text += w;
        }
        if (opt.noise) {
            switch (hkbc::uniform_index(rng, 4)) {
                case 0: text += " #trending"; break;
                case 1: text += " 100%"; break;
                case 2: text += " \xF0\x9F\x94\xA5"; break;  // fire emoji
                default: break;
            }
        }
        ds.records.push_back({"s" + std::to_string(i), text, off ? hkbc::Label::OFF : hkbc::Label::NOT});
    }
    return hkbc::shuffle(ds, seed ^ 0x5EEDULL);
}

/// Writes `ds` as id<TAB>text<TAB>label lines (or id<TAB>text when unlabeled).
inline std::string to_tsv(const hkbc::Dataset& ds, bool with_labels = true) {
    std::string out;
    for (const auto& r : ds.records) {
        out += r.id + "\t" + r.text;
        if (with_labels) out += "\t" + std::string(hkbc::to_string(*r.label));
        out += "\n";
    }
    return out;
}

}  // namespace testsupport
