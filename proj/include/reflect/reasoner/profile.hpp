#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "reflect/classifiers/labels.hpp"
#include "reflect/classifiers/ports.hpp"
#include "reflect/core/error.hpp"
#include "reflect/lingscore/lingscore.hpp"

namespace reflect {

enum class SentimentSummary { all_positive, all_negative, mixed, all_neutral };

constexpr std::string_view to_string(SentimentSummary s) noexcept {
    switch (s) {
        case SentimentSummary::all_positive: return "all_positive";
        case SentimentSummary::all_negative: return "all_negative";
        case SentimentSummary::mixed: return "mixed";
        case SentimentSummary::all_neutral: return "all_neutral";
    }
    return "all_neutral";
}

struct TopicSummary {
    std::size_t topic_id = 0;
    std::string name;
    std::size_t sentence_count = 0;
    std::size_t analysis_sentence_count = 0;
    bool well_thought = false;  // strictly more than three analysis sentences
    std::vector<std::string> matched_terms;
};

/// all_positive needs every emotion present to be in `positive_emotions`,
/// so an emotion outside both sets (information, surprise, ...) rules out
/// the one-sided summaries. no-emotion never counts.
struct ProfileConfig {
    std::set<EmotionLabel> positive_emotions{
        EmotionLabel::appreciation, EmotionLabel::interest,   EmotionLabel::anticipation,
        EmotionLabel::excitement,   EmotionLabel::confidence, EmotionLabel::motivation,
        EmotionLabel::optimism,     EmotionLabel::satisfaction,
    };
    std::set<EmotionLabel> negative_emotions{
        EmotionLabel::annoyance,  EmotionLabel::disapproval_critique, EmotionLabel::challenged,
        EmotionLabel::disappointment, EmotionLabel::insecurity,       EmotionLabel::uncertainty,
        EmotionLabel::wariness,
    };
};

inline constexpr std::size_t kWellThoughtMinExclusive = 3;

struct TextProfile {
    LinguisticProfile linguistic;
    std::array<std::size_t, kGibbsPhaseCount> gibbs_histogram{};  // by argmax
    std::array<double, kGibbsPhaseCount> gibbs_coverage{};         // histogram / sentence count
    std::array<double, kGibbsPhaseCount> gibbs_top3_presence{};    // share of sentences with the phase in top-3
    std::multiset<EmotionLabel> emotions_present;
    SentimentSummary sentiment_summary = SentimentSummary::all_neutral;
    ReflectiveLevel reflective_level = ReflectiveLevel::description;
    Clustering clustering = Clustering::pedagogy_specific;
    std::vector<TopicSummary> topics;  // ordered by topic id
    LanguageCode language;
    std::size_t sentence_count = 0;
};

/// Aggregates per-sentence classifier output. `topic_names[id]` names the
/// active catalog's topics; missing names fall back to "topic-<id>".
inline TextProfile build_profile(const AnalyzedDocument& doc, const LinguisticProfile& linguistic,
                                 std::span<const std::string> topic_names = {}, const ProfileConfig& config = {}) {
    if (doc.sentences.empty()) throw Error(Errc::empty_document, "cannot profile an empty document");
    TextProfile p;
    p.linguistic = linguistic;
    p.reflective_level = doc.level;
    p.clustering = doc.clustering;
    p.language = doc.language;
    p.sentence_count = doc.sentences.size();

    bool positive_signal = false;
    bool negative_signal = false;
    bool other_emotion = false;
    std::vector<TopicSummary> topics;
    for (const auto& s : doc.sentences) {
        const auto phase = s.gibbs.argmax();
        ++p.gibbs_histogram[index_of(phase)];
        for (auto top : s.gibbs.top_k(3)) p.gibbs_top3_presence[index_of(top)] += 1.0;

        for (auto label : s.emotions.labels) {
            if (label == EmotionLabel::no_emotion) continue;
            p.emotions_present.insert(label);
            if (config.positive_emotions.contains(label)) positive_signal = true;
            if (config.negative_emotions.contains(label)) negative_signal = true;
            if (!config.positive_emotions.contains(label) && !config.negative_emotions.contains(label)) {
                other_emotion = true;
            }
        }
        if (s.sentiment == SentimentPolarity::positive) positive_signal = true;
        if (s.sentiment == SentimentPolarity::negative) negative_signal = true;

        if (s.topic.topic_id) {
            const auto id = *s.topic.topic_id;
            auto it = std::find_if(topics.begin(), topics.end(), [id](const TopicSummary& t) { return t.topic_id == id; });
            if (it == topics.end()) {
                TopicSummary t;
                t.topic_id = id;
                t.name = id < topic_names.size() ? topic_names[id] : "topic-" + std::to_string(id);
                topics.push_back(std::move(t));
                it = std::prev(topics.end());
            }
            ++it->sentence_count;
            if (phase == GibbsPhase::analysis) ++it->analysis_sentence_count;
            for (const auto& term : s.topic.matched_terms) {
                if (std::find(it->matched_terms.begin(), it->matched_terms.end(), term) == it->matched_terms.end()) {
                    it->matched_terms.push_back(term);
                }
            }
        }
    }
    const auto n = static_cast<double>(p.sentence_count);
    for (std::size_t i = 0; i < kGibbsPhaseCount; ++i) {
        p.gibbs_coverage[i] = static_cast<double>(p.gibbs_histogram[i]) / n;
        p.gibbs_top3_presence[i] /= n;
    }
    for (auto& t : topics) t.well_thought = t.analysis_sentence_count > kWellThoughtMinExclusive;
    std::sort(topics.begin(), topics.end(), [](const auto& a, const auto& b) { return a.topic_id < b.topic_id; });
    p.topics = std::move(topics);

    if (!positive_signal && !negative_signal) {
        p.sentiment_summary = SentimentSummary::all_neutral;
    } else if (positive_signal && !negative_signal && !other_emotion) {
        p.sentiment_summary = SentimentSummary::all_positive;
    } else if (negative_signal && !positive_signal && !other_emotion) {
        p.sentiment_summary = SentimentSummary::all_negative;
    } else {
        p.sentiment_summary = SentimentSummary::mixed;
    }
    return p;
}

/// Phase with the highest coverage; ties keep declaration order.
inline GibbsPhase strongest_phase(const TextProfile& p) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kGibbsPhaseCount; ++i) {
        if (p.gibbs_coverage[i] > p.gibbs_coverage[best]) best = i;
    }
    return kGibbsPhases[best];
}

}  // namespace reflect
