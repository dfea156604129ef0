#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace hkbc {

/// Binary offensive-language label. NOT precedes OFF; every tie in the
/// toolkit (argmax, votes, zero decisions) resolves to NOT.
enum class Label : std::uint8_t { NOT = 0, OFF = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::NOT, Label::OFF};

inline constexpr std::size_t label_index(Label l) { return static_cast<std::size_t>(l); }

inline constexpr Label label_from_index(std::size_t i) { return i == 0 ? Label::NOT : Label::OFF; }

inline std::string_view to_string(Label l) { return l == Label::OFF ? "OFF" : "NOT"; }

/// +1 for OFF, -1 for NOT.
inline constexpr double label_sign(Label l) { return l == Label::OFF ? 1.0 : -1.0; }

/// Case-insensitive, whitespace-trimmed parse of "OFF" / "NOT".
inline std::optional<Label> parse_label(std::string_view token) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!token.empty() && is_space(token.front())) token.remove_prefix(1);
    while (!token.empty() && is_space(token.back())) token.remove_suffix(1);
    if (token.size() != 3) return std::nullopt;
    std::string upper(token);
    for (auto& c : upper) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    if (upper == "OFF") return Label::OFF;
    if (upper == "NOT") return Label::NOT;
    return std::nullopt;
}

/// Label with the larger count; ties go to NOT.
template <class Count>
Label majority(Count not_count, Count off_count) {
    return off_count > not_count ? Label::OFF : Label::NOT;
}

}  // namespace hkbc
