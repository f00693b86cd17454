#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

/// Closed-class and suffix lexicon for one language.
///
/// pos.<lang>.tsv lines are `surface<TAB>TAG`; a surface starting with '-'
/// is a suffix rule for open-class words ("-lich<TAB>ADJ").
/// subordinators.<lang>.tsv lines are `surface<TAB>clause-type`.
struct TaggerLexicon {
    std::unordered_map<std::string, PosTag> words;
    std::vector<std::pair<std::string, PosTag>> suffixes;  // longest first
    std::unordered_map<std::string, ClauseType> subordinators;
    std::set<std::string, std::less<>> abbreviations;
    bool capitalized_nouns = false;  // German orthography

    static TaggerLexicon load(const std::filesystem::path& lexicon_dir, std::string_view lang) {
        TaggerLexicon lex;
        const std::string suffix = "." + std::string(lang);
        const auto pos_path = lexicon_dir / ("pos" + suffix + ".tsv");
        for (const auto& row : read_tsv(pos_path)) {
            if (row.size() < 2) throw Error(Errc::schema_error, "pos line needs surface and tag in " + pos_path.string());
            const auto tag = parse_pos_tag(row[1]);
            if (!tag) throw Error(Errc::schema_error, "unknown POS tag '" + row[1] + "' in " + pos_path.string());
            const auto surface = utf8::to_lower(row[0]);
            if (surface.size() > 1 && surface.front() == '-') {
                lex.suffixes.emplace_back(surface.substr(1), *tag);
            } else {
                lex.words.emplace(surface, *tag);
            }
        }
        std::stable_sort(lex.suffixes.begin(), lex.suffixes.end(),
                         [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
        const auto sub_path = lexicon_dir / ("subordinators" + suffix + ".tsv");
        for (const auto& row : read_tsv(sub_path)) {
            if (row.size() < 2) throw Error(Errc::schema_error, "subordinator line needs a category in " + sub_path.string());
            const auto type = parse_clause_type(row[1]);
            if (!type) throw Error(Errc::schema_error, "unknown clause type '" + row[1] + "' in " + sub_path.string());
            lex.subordinators.emplace(utf8::to_lower(row[0]), *type);
        }
        for (const auto& a : read_lines(lexicon_dir / ("abbreviations" + suffix + ".txt"))) {
            lex.abbreviations.insert(utf8::to_lower(a));
        }
        lex.capitalized_nouns = lang == "de";
        return lex;
    }

    std::optional<ClauseType> clause_type(std::string_view lemma) const {
        const auto it = subordinators.find(std::string(lemma));
        if (it == subordinators.end()) return std::nullopt;
        return it->second;
    }
};

/// Tokenizer and lexicon-driven POS tagger for de/en/es.
class Tagger {
public:
    Tagger() = default;

    void add_language(const LanguageCode& lang, TaggerLexicon lexicon) {
        lexicons_[lang.tag()] = std::move(lexicon);
    }

    static Tagger load(const std::filesystem::path& lexicon_dir) {
        Tagger t;
        for (auto lang : kNativeLanguages) {
            t.add_language(LanguageCode::from_tag(lang), TaggerLexicon::load(lexicon_dir, lang));
        }
        return t;
    }

    const TaggerLexicon& lexicon(const LanguageCode& lang) const {
        const auto it = lexicons_.find(lang.tag());
        if (it == lexicons_.end()) throw Error(Errc::unsupported_language, "no tagger lexicon for '" + lang.tag() + "'");
        return it->second;
    }

    /// Tokenizes `sentence_text`, whose first byte sits at `base_offset` in
    /// the source document, and tags every token.
    std::vector<Token> tokenize_and_tag(std::string_view sentence_text, const LanguageCode& lang,
                                        std::size_t base_offset = 0) const {
        const auto& lex = lexicon(lang);
        auto tokens = tokenize(sentence_text, lex, base_offset);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            tokens[i].pos = tag(tokens, i, lex);
        }
        return tokens;
    }

private:
    static std::vector<Token> tokenize(std::string_view text, const TaggerLexicon& lex, std::size_t base) {
        std::vector<Token> out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t next = pos;
            if (utf8::is_space(utf8::decode(text, next))) {
                pos = next;
                continue;
            }
            std::size_t chunk_end = pos;
            while (chunk_end < text.size()) {
                std::size_t n = chunk_end;
                if (utf8::is_space(utf8::decode(text, n))) break;
                chunk_end = n;
            }
            split_chunk(text, pos, chunk_end, lex, base, out);
            pos = chunk_end;
        }
        return out;
    }

    static void push(std::string_view text, std::size_t b, std::size_t e, std::size_t base, std::vector<Token>& out) {
        Token t;
        t.surface = std::string(text.substr(b, e - b));
        t.lemma = utf8::to_lower(t.surface);
        t.span = Span{base + b, base + e};
        out.push_back(std::move(t));
    }

    // Peels punctuation off both ends of a whitespace-delimited chunk. Runs
    // of periods ("...") stay together, known abbreviations keep their dot.
    static void split_chunk(std::string_view text, std::size_t begin, std::size_t end, const TaggerLexicon& lex,
                            std::size_t base, std::vector<Token>& out) {
        std::vector<std::pair<std::size_t, std::size_t>> trailing;
        std::size_t b = begin;
        std::size_t e = end;
        while (b < e) {
            std::size_t n = b;
            if (!utf8::is_punct(utf8::decode(text, n))) break;
            if (lex.abbreviations.contains(utf8::to_lower(text.substr(b, e - b)))) break;
            std::size_t run = n;
            if (text[b] == '.') {
                while (run < e && text[run] == '.') ++run;
            }
            push(text, b, run, base, out);
            b = run;
        }
        while (e > b) {
            if (lex.abbreviations.contains(utf8::to_lower(text.substr(b, e - b)))) break;
            std::size_t start = e - 1;
            while (start > b && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) --start;
            std::size_t n = start;
            if (!utf8::is_punct(utf8::decode(text, n))) break;
            if (text[start] == '.') {
                while (start > b && text[start - 1] == '.') --start;
            }
            trailing.emplace_back(start, e);
            e = start;
        }
        if (b < e) push(text, b, e, base, out);
        for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) push(text, it->first, it->second, base, out);
    }

    static bool all_of_cp(std::string_view s, bool (*pred)(char32_t)) {
        std::size_t pos = 0;
        while (pos < s.size()) {
            if (!pred(utf8::decode(s, pos))) return false;
        }
        return !s.empty();
    }

    static bool is_number(std::string_view s) {
        std::size_t pos = 0;
        bool digit = false;
        while (pos < s.size()) {
            const char32_t c = utf8::decode(s, pos);
            if (utf8::is_digit(c)) {
                digit = true;
            } else if (c != '.' && c != ',' && c != ':' && c != '/' && c != '-' && c != '%') {
                return false;
            }
        }
        return digit;
    }

    static PosTag tag(const std::vector<Token>& tokens, std::size_t i, const TaggerLexicon& lex) {
        const Token& tok = tokens[i];
        if (all_of_cp(tok.surface, [](char32_t c) { return utf8::is_punct(c); })) return PosTag::PUNCT;
        if (is_number(tok.surface)) return PosTag::NUM;

        const bool after_comma = i > 0 && tokens[i - 1].surface == ",";
        if (const auto it = lex.words.find(tok.lemma); it != lex.words.end()) {
            // Ambiguous relative/complement words ("die", "that", "que") only
            // open a clause right after a comma.
            if (it->second != PosTag::CONJ_SUBORD && after_comma && lex.subordinators.contains(tok.lemma)) {
                return PosTag::CONJ_SUBORD;
            }
            return it->second;
        }
        if (lex.subordinators.contains(tok.lemma)) return PosTag::CONJ_SUBORD;
        if (lex.capitalized_nouns && utf8::starts_upper(tok.surface)) return PosTag::NOUN;
        for (const auto& [suffix, suffix_tag] : lex.suffixes) {
            if (tok.lemma.size() >= suffix.size() + 2 &&
                std::string_view(tok.lemma).substr(tok.lemma.size() - suffix.size()) == suffix) {
                return suffix_tag;
            }
        }
        return PosTag::OTHER;
    }

    std::map<std::string, TaggerLexicon, std::less<>> lexicons_;
};

}  // namespace reflect
