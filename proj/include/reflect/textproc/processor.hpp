#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "reflect/textproc/langid.hpp"
#include "reflect/textproc/segment.hpp"
#include "reflect/textproc/tagger.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

/// Language identification, segmentation and tagging loaded from one data
/// directory (`<data>/lexicons`, `<data>/langid`).
class TextProcessor {
public:
    TextProcessor(LanguageIdentifier langid, SentenceSegmenter segmenter, Tagger tagger)
        : langid_(std::move(langid)), segmenter_(std::move(segmenter)), tagger_(std::move(tagger)) {}

    static TextProcessor load(const std::filesystem::path& data_dir) {
        return TextProcessor(LanguageIdentifier::load(data_dir / "langid"),
                             SentenceSegmenter::load(data_dir / "lexicons"), Tagger::load(data_dir / "lexicons"));
    }

    const LanguageIdentifier& langid() const noexcept { return langid_; }
    const SentenceSegmenter& segmenter() const noexcept { return segmenter_; }
    const Tagger& tagger() const noexcept { return tagger_; }

    LanguageDetection detect_language(std::string_view text) const { return langid_.detect(text); }

    std::vector<Sentence> segment_sentences(std::string_view text) const { return segmenter_.segment(text); }

    /// Segments and tags; token spans are offsets into `text`.
    std::vector<Sentence> analyze(std::string_view text, const LanguageCode& lang) const {
        auto sentences = segmenter_.segment(text);
        for (auto& s : sentences) {
            s.tokens = tagger_.tokenize_and_tag(text.substr(s.span.begin, s.span.size()), lang, s.span.begin);
        }
        return sentences;
    }

private:
    LanguageIdentifier langid_;
    SentenceSegmenter segmenter_;
    Tagger tagger_;
};

}  // namespace reflect
