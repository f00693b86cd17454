#pragma once

// Hand-built analyzed documents for reasoner tests: each sentence gets a
// chosen Gibbs argmax, emotions, sentiment and topic.

#include <array>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "reflect/classifiers/ports.hpp"
#include "reflect/lingscore/lingscore.hpp"
#include "reflect/reasoner/profile.hpp"

namespace reflect::testing {

struct FakeSentence {
    FakeSentence(GibbsPhase p = GibbsPhase::description, std::set<EmotionLabel> e = {EmotionLabel::no_emotion},
                 SentimentPolarity s = SentimentPolarity::neutral, std::optional<std::size_t> t = std::nullopt)
        : phase(p), emotions(std::move(e)), sentiment(s), topic(t) {}

    GibbsPhase phase;
    std::set<EmotionLabel> emotions;
    SentimentPolarity sentiment;
    std::optional<std::size_t> topic;
};

inline GibbsDistribution peaked(GibbsPhase phase) {
    std::array<double, kGibbsPhaseCount> scores{};
    scores.fill(0.1);
    scores[index_of(phase)] = 1.0;
    return GibbsDistribution::from_scores(scores);
}

inline AnalyzedDocument fake_document(const std::vector<FakeSentence>& sentences,
                                      ReflectiveLevel level = ReflectiveLevel::description) {
    AnalyzedDocument doc;
    doc.level = level;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        SentenceAnalysis a;
        a.sentence.index = i;
        a.sentence.tokens.push_back(Token{"x", "x", PosTag::OTHER, {}});
        a.gibbs = peaked(sentences[i].phase);
        a.emotions.labels = sentences[i].emotions;
        a.sentiment = sentences[i].sentiment;
        if (sentences[i].topic) {
            a.topic.topic_id = sentences[i].topic;
            a.topic.matched_terms = {"x"};
        }
        doc.sentences.push_back(std::move(a));
    }
    return doc;
}

/// Linguistic profile that triggers none of the default rules.
inline LinguisticProfile rich_linguistics(std::size_t sentences) {
    LinguisticProfile l;
    l.sentence_count = sentences;
    l.token_count = sentences * 15;
    l.mean_sentence_length = 15.0;
    l.adverb_verb_ratio = 0.5;
    l.adjective_noun_ratio = 0.5;
    l.connector_density = 1.0;
    l.lexical_variability = 0.7;
    l.subordinate_clause_counts = empty_clause_counts();
    l.connectors_by_category = empty_clause_counts();
    return l;
}

inline TextProfile fake_profile(const std::vector<FakeSentence>& sentences,
                                ReflectiveLevel level = ReflectiveLevel::description,
                                const std::vector<std::string>& topic_names = {}) {
    return build_profile(fake_document(sentences, level), rich_linguistics(sentences.size()), topic_names);
}

/// n sentences with the given phases repeated in order.
inline std::vector<FakeSentence> with_phases(const std::vector<GibbsPhase>& phases) {
    std::vector<FakeSentence> out;
    for (auto p : phases) out.push_back(FakeSentence{p});
    return out;
}

}  // namespace reflect::testing
