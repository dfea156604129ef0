#pragma once

#include <cstddef>
#include <string_view>

namespace hkbc::utf8 {

/// Length in bytes of the well-formed UTF-8 sequence starting at s[pos],
/// or 0 if the bytes there are not a valid encoding (overlongs, surrogates
/// and code points above U+10FFFF count as invalid).
inline std::size_t sequence_length(std::string_view s, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) return 1;
    std::size_t len = 0;
    unsigned char lo = 0x80, hi = 0xBF;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
        len = 2;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
        len = 3;
        if (b0 == 0xE0) lo = 0xA0;
        if (b0 == 0xED) hi = 0x9F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
        len = 4;
        if (b0 == 0xF0) lo = 0x90;
        if (b0 == 0xF4) hi = 0x8F;
    } else {
        return 0;
    }
    if (pos + len > s.size()) return 0;
    const unsigned char b1 = byte(pos + 1);
    if (b1 < lo || b1 > hi) return 0;
    for (std::size_t i = 2; i < len; ++i) {
        const unsigned char b = byte(pos + i);
        if (b < 0x80 || b > 0xBF) return 0;
    }
    return len;
}

/// Byte offset of the first invalid sequence, or npos if `s` is valid UTF-8.
inline std::size_t first_invalid(std::string_view s) {
    for (std::size_t pos = 0; pos < s.size();) {
        const std::size_t len = sequence_length(s, pos);
        if (len == 0) return pos;
        pos += len;
    }
    return std::string_view::npos;
}

}  // namespace hkbc::utf8
