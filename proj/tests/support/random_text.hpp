#pragma once

#include <string>

#include <hkbc/random.hpp>

namespace testsupport {

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

/// Mixed ASCII, Latin-1, Malayalam, Tamil, emoji, markers, digits,
/// whitespace, control characters and the odd invalid byte.
inline std::string random_unicode_text(hkbc::Rng& rng, std::size_t max_len = 40) {
    std::string s;
    const auto len = hkbc::uniform_index(rng, max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
        switch (hkbc::uniform_index(rng, 10)) {
            case 0: append_utf8(s, static_cast<char32_t>(0x20 + hkbc::uniform_index(rng, 0x5F))); break;
            case 1: append_utf8(s, static_cast<char32_t>('a' + hkbc::uniform_index(rng, 26))); break;
            case 2: append_utf8(s, static_cast<char32_t>('A' + hkbc::uniform_index(rng, 26))); break;
            case 3: s += " \t\n"[hkbc::uniform_index(rng, 3)]; break;
            case 4: s += "@#%$^()-0123456789"[hkbc::uniform_index(rng, 18)]; break;
            case 5: append_utf8(s, static_cast<char32_t>(0xA0 + hkbc::uniform_index(rng, 0x60))); break;
            case 6: append_utf8(s, static_cast<char32_t>(0x0D00 + hkbc::uniform_index(rng, 0x80))); break;
            case 7: append_utf8(s, static_cast<char32_t>(0x0B80 + hkbc::uniform_index(rng, 0x80))); break;
            case 8: append_utf8(s, static_cast<char32_t>(0x1F300 + hkbc::uniform_index(rng, 0x150))); break;
            default: {
                const char odd[] = {'\x01', '\x7F', '\x80', '\xFF', '\xC3'};
                s += odd[hkbc::uniform_index(rng, 5)];
            }
        }
    }
    return s;
}

}  // namespace testsupport
