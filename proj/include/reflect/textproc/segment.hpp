#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

/// Rule-based sentence splitter. Terminators are . ! ? and the ellipsis; a
/// period does not end a sentence when the word it closes is a known
/// abbreviation ("Dr.", "z.B.", "etc.").
class SentenceSegmenter {
public:
    SentenceSegmenter() = default;

    explicit SentenceSegmenter(const std::vector<std::string>& abbreviations) {
        for (const auto& a : abbreviations) add_abbreviation(a);
    }

    /// Loads the union of `abbreviations.<lang>.txt` for the native
    /// languages found in `lexicon_dir`.
    static SentenceSegmenter load(const std::filesystem::path& lexicon_dir) {
        SentenceSegmenter seg;
        for (auto lang : kNativeLanguages) {
            const auto path = lexicon_dir / ("abbreviations." + std::string(lang) + ".txt");
            for (const auto& a : read_lines(path)) seg.add_abbreviation(a);
        }
        return seg;
    }

    void add_abbreviation(std::string_view abbreviation) {
        std::string a = utf8::to_lower(utf8::trim(abbreviation));
        if (a.empty()) return;
        if (a.back() != '.') a.push_back('.');
        abbreviations_.insert(std::move(a));
    }

    bool is_abbreviation(std::string_view word_with_period) const {
        return abbreviations_.contains(utf8::to_lower(word_with_period));
    }

    std::vector<Sentence> segment(std::string_view text) const {
        if (utf8::trim(text).empty()) throw Error(Errc::empty_input, "cannot segment empty text");
        std::vector<Sentence> out;
        std::size_t pos = 0;
        std::size_t start = npos;
        std::size_t last_non_space_end = 0;
        while (pos < text.size()) {
            const std::size_t cp_begin = pos;
            const char32_t c = utf8::decode(text, pos);
            if (utf8::is_space(c)) continue;
            if (start == npos) start = cp_begin;
            last_non_space_end = pos;
            if (!is_terminator(c)) continue;

            // Swallow the terminator run plus closing quotes/brackets.
            bool single_period = c == '.';
            std::size_t run_end = pos;
            while (run_end < text.size()) {
                std::size_t next = run_end;
                const char32_t d = utf8::decode(text, next);
                if (is_terminator(d)) {
                    single_period = false;
                } else if (!is_closer(d)) {
                    break;
                }
                run_end = next;
            }
            const bool at_boundary = run_end >= text.size() || [&] {
                std::size_t next = run_end;
                return utf8::is_space(utf8::decode(text, next));
            }();
            if (!at_boundary) {
                pos = run_end;
                last_non_space_end = run_end;
                continue;
            }
            if (single_period && closes_abbreviation(text, start, cp_begin)) {
                pos = run_end;
                last_non_space_end = run_end;
                continue;
            }
            out.push_back(Sentence{out.size(), Span{start, run_end}, {}});
            start = npos;
            pos = run_end;
        }
        if (start != npos) out.push_back(Sentence{out.size(), Span{start, last_non_space_end}, {}});
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    static constexpr bool is_terminator(char32_t c) noexcept {
        return c == '.' || c == '!' || c == '?' || c == 0x2026;
    }

    static constexpr bool is_closer(char32_t c) noexcept {
        return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0x201C || c == 0x201D ||
               c == 0x2019 || c == 0x00BB || c == 0x00AB;
    }

    // `period` is the byte offset of the '.'; the word runs back to the
    // previous whitespace (bounded by the sentence start).
    bool closes_abbreviation(std::string_view text, std::size_t sentence_start, std::size_t period) const {
        std::size_t word_start = period;
        while (word_start > sentence_start && !is_ascii_space(text[word_start - 1])) --word_start;
        // Strip opening brackets/quotes glued to the word.
        while (word_start < period && (text[word_start] == '(' || text[word_start] == '"' ||
                                       text[word_start] == '[' || text[word_start] == '\'')) {
            ++word_start;
        }
        if (word_start == period) return false;
        return is_abbreviation(text.substr(word_start, period + 1 - word_start));
    }

    static constexpr bool is_ascii_space(char c) noexcept {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    }

    std::set<std::string, std::less<>> abbreviations_;
};

}  // namespace reflect
