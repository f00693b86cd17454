#pragma once

// Lexicon files: UTF-8, one entry per line, columns separated by TAB.
// Blank lines and lines starting with '#' are ignored.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/unicode.hpp"

namespace reflect {

inline std::string read_file(const std::filesystem::path& path, Errc missing = Errc::missing_lexicon) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(missing, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::vector<std::string>> parse_tsv(std::string_view content) {
    std::vector<std::vector<std::string>> rows;
    for (auto& raw : split(content, '\n')) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto line = utf8::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto cols = split(line, '\t');
        for (auto& c : cols) c = std::string(utf8::trim(c));
        rows.push_back(std::move(cols));
    }
    return rows;
}

inline std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path) {
    return parse_tsv(read_file(path));
}

/// Single-column list (abbreviations, forbidden sequences, ...).
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::vector<std::string> out;
    for (auto& row : read_tsv(path)) out.push_back(std::move(row.front()));
    return out;
}

inline double parse_weight(const std::string& s, const std::string& context) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw Error(Errc::schema_error, "bad weight '" + s + "' in " + context);
    return value;
}

/// Phrase lexicon over lowercase word sequences. An entry word ending in '*'
/// matches any word with that prefix. Matching is greedy left-to-right,
/// longest entry first, and never overlaps.
template <class Payload>
class PhraseLexicon {
public:
    struct Entry {
        std::vector<std::string> words;
        Payload payload;
    };

    struct Match {
        std::size_t begin;  // first token index
        std::size_t end;    // one past the last token index
        const Entry* entry;
    };

    void add(std::string_view phrase, Payload payload) {
        Entry e;
        for (auto& w : split(utf8::to_lower(utf8::trim(phrase)), ' ')) {
            if (!w.empty()) e.words.push_back(std::move(w));
        }
        if (e.words.empty()) return;
        e.payload = std::move(payload);
        entries_.push_back(std::move(e));
        reorder();
    }

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    /// `words` is any random-access range; `proj` maps an element to its
    /// lowercase form.
    template <class Range, class Proj>
    std::vector<Match> match(const Range& words, Proj proj) const {
        std::vector<Match> out;
        const std::size_t n = std::size(words);
        std::size_t i = 0;
        while (i < n) {
            const Entry* best = nullptr;
            for (std::size_t idx : order_) {
                const Entry& e = entries_[idx];
                if (i + e.words.size() > n) continue;
                bool ok = true;
                for (std::size_t k = 0; k < e.words.size() && ok; ++k) {
                    ok = word_matches(e.words[k], proj(words[i + k]));
                }
                if (ok) {
                    best = &e;
                    break;
                }
            }
            if (best != nullptr) {
                out.push_back({i, i + best->words.size(), best});
                i += best->words.size();
            } else {
                ++i;
            }
        }
        return out;
    }

    template <class Range>
    std::vector<Match> match(const Range& words) const {
        return match(words, [](const auto& w) -> std::string_view { return w; });
    }

private:
    static bool word_matches(const std::string& pattern, std::string_view word) {
        if (!pattern.empty() && pattern.back() == '*') {
            const std::string_view stem(pattern.data(), pattern.size() - 1);
            return word.size() >= stem.size() && word.substr(0, stem.size()) == stem;
        }
        return pattern == word;
    }

    // Longest first; among equal lengths, exact words before wildcards, then
    // file order.
    void reorder() {
        order_.resize(entries_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        auto wildcards = [this](std::size_t idx) {
            return std::count_if(entries_[idx].words.begin(), entries_[idx].words.end(),
                                 [](const std::string& w) { return !w.empty() && w.back() == '*'; });
        };
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (entries_[a].words.size() != entries_[b].words.size())
                return entries_[a].words.size() > entries_[b].words.size();
            return wildcards(a) < wildcards(b);
        });
    }

    std::vector<Entry> entries_;
    std::vector<std::size_t> order_;
};

/// Cue entry payload: `term<TAB>label<TAB>weight`.
struct Cue {
    std::string label;
    double weight = 1.0;
};

using CueLexicon = PhraseLexicon<Cue>;

inline CueLexicon load_cue_lexicon(const std::filesystem::path& path) {
    CueLexicon lex;
    for (const auto& row : read_tsv(path)) {
        if (row.size() < 2) throw Error(Errc::schema_error, "cue line needs term and label in " + path.string());
        const double w = row.size() >= 3 ? parse_weight(row[2], path.string()) : 1.0;
        lex.add(row[0], Cue{row[1], w});
    }
    return lex;
}

}  // namespace reflect
