#pragma once

// Minimal UTF-8 utilities. Covers the Latin ranges used by German, English
// and Spanish (plus French/Italian for language identification).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace reflect::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes the code point starting at `pos` and advances `pos` past it.
/// Malformed sequences yield U+FFFD and advance by one byte.
inline char32_t decode(std::string_view s, std::size_t& pos) noexcept {
    const auto lead = static_cast<unsigned char>(s[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return kReplacement;
    }
    if (pos + len > s.size()) {
        ++pos;
        return kReplacement;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const auto c = static_cast<unsigned char>(s[pos + i]);
        if ((c & 0xC0) != 0x80) {
            ++pos;
            return kReplacement;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    pos += len;
    return cp;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

constexpr bool is_upper(char32_t c) noexcept {
    if (c >= 'A' && c <= 'Z') return true;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
    if (c >= 0x100 && c <= 0x17F) return (c % 2) == 0 && c != 0x138;
    return c == 0x1E9E;
}

constexpr char32_t to_lower(char32_t c) noexcept {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    if (c >= 0x100 && c <= 0x17F && (c % 2) == 0 && c != 0x138) return c + 1;
    if (c == 0x1E9E) return 0xDF;
    return c;
}

constexpr bool is_space(char32_t c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
           c == 0xA0 || c == 0x2028 || c == 0x2029 || (c >= 0x2000 && c <= 0x200A) ||
           c == 0x202F || c == 0x3000;
}

constexpr bool is_digit(char32_t c) noexcept { return c >= '0' && c <= '9'; }

constexpr bool is_letter(char32_t c) noexcept {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;
    if (c == 0x1E9E) return true;
    // Greek, Cyrillic and beyond: treat as letters, we never tag them anyway.
    return c >= 0x370 && c < 0x2000;
}

constexpr bool is_punct(char32_t c) noexcept {
    if (c < 0x80) {
        return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
               (c >= '{' && c <= '~');
    }
    return c == 0xA1 || c == 0xAB || c == 0xB7 || c == 0xBB || c == 0xBF ||
           (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
           (c >= 0x27E6 && c <= 0x27EF) || c == 0x2192;
}

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) append(out, to_lower(decode(s, pos)));
    return out;
}

inline std::size_t length(std::string_view s) noexcept {
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        decode(s, pos);
        ++n;
    }
    return n;
}

/// Number of code points in s[0, byte_offset).
inline std::size_t code_point_offset(std::string_view s, std::size_t byte_offset) noexcept {
    return length(s.substr(0, byte_offset));
}

inline std::size_t count_non_space(std::string_view s) noexcept {
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (!is_space(decode(s, pos))) ++n;
    }
    return n;
}

inline std::string_view trim(std::string_view s) noexcept {
    std::size_t begin = 0;
    while (begin < s.size()) {
        std::size_t next = begin;
        if (!is_space(decode(s, next))) break;
        begin = next;
    }
    std::size_t end = begin;
    std::size_t pos = begin;
    while (pos < s.size()) {
        if (!is_space(decode(s, pos))) end = pos;
    }
    return s.substr(begin, end - begin);
}

inline bool starts_upper(std::string_view s) noexcept {
    if (s.empty()) return false;
    std::size_t pos = 0;
    return is_upper(decode(s, pos));
}

}  // namespace reflect::utf8
