#pragma once

// Character-trigram language identification. One profile per language,
// trained from the bundled sample text in data/langid/<tag>.txt.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

struct LanguageDetection {
    LanguageCode language;
    double confidence = 0.0;  // posterior margin between best and runner-up
};

class LanguageIdentifier {
public:
    static constexpr std::size_t kMinNonSpace = 20;

    /// Builds profiles from raw training text per language tag.
    static LanguageIdentifier train(const std::map<std::string, std::string>& corpora) {
        LanguageIdentifier id;
        std::unordered_map<std::u32string, int> vocabulary;
        for (const auto& [tag, text] : corpora) {
            Profile p;
            p.language = LanguageCode::from_tag(tag);
            for (auto& gram : trigrams(text)) {
                ++p.counts[gram];
                ++p.total;
                vocabulary[gram] = 1;
            }
            id.profiles_.push_back(std::move(p));
        }
        id.vocabulary_size_ = static_cast<double>(vocabulary.size()) + 1.0;
        return id;
    }

    /// Loads every `<tag>.txt` in `dir`.
    static LanguageIdentifier load(const std::filesystem::path& dir) {
        std::map<std::string, std::string> corpora;
        if (!std::filesystem::is_directory(dir)) throw Error(Errc::missing_lexicon, "no langid directory " + dir.string());
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().extension() != ".txt") continue;
            corpora[entry.path().stem().string()] = read_file(entry.path());
        }
        if (corpora.empty()) throw Error(Errc::missing_lexicon, "no language profiles in " + dir.string());
        return train(corpora);
    }

    LanguageDetection detect(std::string_view text) const {
        const auto trimmed = utf8::trim(text);
        if (trimmed.empty()) throw Error(Errc::empty_input, "cannot identify language of empty text");
        if (utf8::count_non_space(trimmed) < kMinNonSpace) {
            throw Error(Errc::too_short, "language identification needs at least 20 non-whitespace characters");
        }
        const auto grams = trigrams(trimmed);
        std::vector<double> scores;
        scores.reserve(profiles_.size());
        for (const auto& p : profiles_) {
            const double denom = std::log(static_cast<double>(p.total) + kAlpha * vocabulary_size_);
            double s = 0.0;
            for (const auto& g : grams) {
                const auto it = p.counts.find(g);
                const double c = it == p.counts.end() ? 0.0 : static_cast<double>(it->second);
                s += std::log(c + kAlpha) - denom;
            }
            scores.push_back(s);
        }
        // Softmax posterior; profiles are ordered by tag so ties resolve
        // deterministically to the lexicographically first tag.
        const double top = *std::max_element(scores.begin(), scores.end());
        std::vector<double> post(scores.size());
        double z = 0.0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            post[i] = std::exp(scores[i] - top);
            z += post[i];
        }
        for (auto& v : post) v /= z;
        std::size_t best = 0;
        for (std::size_t i = 1; i < post.size(); ++i) {
            if (post[i] > post[best]) best = i;
        }
        double runner_up = 0.0;
        for (std::size_t i = 0; i < post.size(); ++i) {
            if (i != best) runner_up = std::max(runner_up, post[i]);
        }
        return {profiles_[best].language, std::clamp(post[best] - runner_up, 0.0, 1.0)};
    }

    std::vector<LanguageCode> languages() const {
        std::vector<LanguageCode> out;
        for (const auto& p : profiles_) out.push_back(p.language);
        return out;
    }

    /// Word-bounded trigrams over lowercase letters; anything else separates
    /// words.
    static std::vector<std::u32string> trigrams(std::string_view text) {
        std::vector<std::u32string> out;
        std::u32string word;
        auto flush = [&] {
            if (word.empty()) return;
            const std::u32string padded = U" " + word + U" ";
            for (std::size_t i = 0; i + 3 <= padded.size(); ++i) out.push_back(padded.substr(i, 3));
            word.clear();
        };
        std::size_t pos = 0;
        while (pos < text.size()) {
            const char32_t c = utf8::decode(text, pos);
            if (utf8::is_letter(c)) {
                word.push_back(utf8::to_lower(c));
            } else {
                flush();
            }
        }
        flush();
        return out;
    }

private:
    static constexpr double kAlpha = 0.5;

    struct Profile {
        LanguageCode language;
        std::unordered_map<std::u32string, long> counts;
        long total = 0;
    };

    std::vector<Profile> profiles_;
    double vocabulary_size_ = 1.0;
};

}  // namespace reflect
