#pragma once

// Deterministic lexicon backends for every classifier port. They let the
// whole pipeline run without trained models; swap in real backends through
// the ports.
//
// Cue files are `term<TAB>label<TAB>weight`, one per language:
//   emotions.<lang>.tsv   label = emotion name
//   gibbs.<lang>.tsv      label = phase name
//   sentiment.<lang>.tsv  label = positive | negative | negator
//   levels.<lang>.tsv     label = contrast | wider_context
// Topic catalogs live in topics/<clustering>.tsv (label = topic name) and
// cover all languages in one file; topic ids follow first appearance.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "reflect/classifiers/labels.hpp"
#include "reflect/classifiers/ports.hpp"
#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"

namespace reflect {

namespace detail {

inline auto lemma_of = [](const Token& t) -> std::string_view { return t.lemma; };

inline std::string join_surfaces(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += tokens[i].surface;
    }
    return out;
}

inline void require_tokens(const Sentence& s) {
    if (s.tokens.empty()) throw Error(Errc::empty_sentence, "sentence " + std::to_string(s.index) + " has no tokens");
}

/// One cue lexicon per native language.
class PerLanguage {
public:
    static PerLanguage load(const std::filesystem::path& dir, std::string_view stem) {
        PerLanguage p;
        for (auto lang : kNativeLanguages) {
            p.lexicons_[std::string(lang)] = load_cue_lexicon(dir / (std::string(stem) + "." + std::string(lang) + ".tsv"));
        }
        return p;
    }

    void set(const LanguageCode& lang, CueLexicon lex) { lexicons_[lang.tag()] = std::move(lex); }

    const CueLexicon& at(const LanguageCode& lang) const {
        const auto it = lexicons_.find(lang.tag());
        if (it == lexicons_.end()) throw Error(Errc::unsupported_language, "no cue lexicon for '" + lang.tag() + "'");
        return it->second;
    }

private:
    std::map<std::string, CueLexicon> lexicons_;
};

}  // namespace detail

// ---------------------------------------------------------------- emotions

/// Each label scores the share of cue weight it received; labels within
/// `relative_threshold` of the best score are predicted.
class LexiconEmotionClassifier final : public EmotionPort {
public:
    explicit LexiconEmotionClassifier(detail::PerLanguage cues, double relative_threshold = 0.5)
        : cues_(std::move(cues)), relative_threshold_(relative_threshold) {
        for (auto lang : kNativeLanguages) validate(cues_.at(LanguageCode::from_tag(lang)));
    }

    EmotionPrediction predict(const SentenceQuery& q) const override {
        detail::require_tokens(q.sentence);
        std::map<EmotionLabel, double> hits;
        double total = 0.0;
        for (const auto& m : cues_.at(q.language).match(q.sentence.tokens, detail::lemma_of)) {
            const auto label = *parse_emotion(m.entry->payload.label);
            hits[label] += m.entry->payload.weight;
            total += m.entry->payload.weight;
        }
        EmotionPrediction out;
        for (auto l : all_emotions()) out.scores[l] = 0.0;
        if (total <= 0.0) {
            out.scores[EmotionLabel::no_emotion] = 1.0;
            return out;
        }
        double best = 0.0;
        for (auto& [label, w] : hits) {
            out.scores[label] = std::clamp(w / total, 0.0, 1.0);
            best = std::max(best, out.scores[label]);
        }
        const double threshold = relative_threshold_ * best;
        out.labels.clear();
        for (const auto& [label, score] : out.scores) {
            if (score > 0.0 && score >= threshold) out.labels.insert(label);
        }
        return out;
    }

    std::string name() const override { return "lexicon"; }
    std::string label_scheme() const override { return "emotions-19"; }

private:
    static void validate(const CueLexicon& lex) {
        for (const auto& e : lex.entries()) {
            const auto label = parse_emotion(e.payload.label);
            if (!label || *label == EmotionLabel::no_emotion) {
                throw Error(Errc::schema_error, "unknown emotion cue label '" + e.payload.label + "'");
            }
        }
    }

    detail::PerLanguage cues_;
    double relative_threshold_;
};

// ------------------------------------------------------------ gibbs phases

/// Phase cues plus emotion cues (which count toward `feelings`), with
/// additive smoothing so every phase keeps a positive probability.
class LexiconGibbsClassifier final : public GibbsPort {
public:
    static constexpr double kSmoothing = 0.01;

    LexiconGibbsClassifier(detail::PerLanguage phase_cues, detail::PerLanguage emotion_cues)
        : phase_cues_(std::move(phase_cues)), emotion_cues_(std::move(emotion_cues)) {
        for (auto lang : kNativeLanguages) {
            for (const auto& e : phase_cues_.at(LanguageCode::from_tag(lang)).entries()) {
                if (!parse_gibbs_phase(e.payload.label)) {
                    throw Error(Errc::schema_error, "unknown Gibbs cue label '" + e.payload.label + "'");
                }
            }
        }
    }

    GibbsDistribution predict(const SentenceQuery& q) const override {
        detail::require_tokens(q.sentence);
        std::array<double, kGibbsPhaseCount> scores{};
        scores.fill(kSmoothing);
        for (const auto& m : phase_cues_.at(q.language).match(q.sentence.tokens, detail::lemma_of)) {
            scores[index_of(*parse_gibbs_phase(m.entry->payload.label))] += m.entry->payload.weight;
        }
        for (const auto& m : emotion_cues_.at(q.language).match(q.sentence.tokens, detail::lemma_of)) {
            scores[index_of(GibbsPhase::feelings)] += m.entry->payload.weight;
        }
        return GibbsDistribution::from_scores(scores);
    }

    std::string name() const override { return "lexicon"; }
    std::string label_scheme() const override { return "gibbs-6"; }

private:
    detail::PerLanguage phase_cues_;
    detail::PerLanguage emotion_cues_;
};

// ---------------------------------------------------------------- sentiment

/// Sign of positive minus negative cue weight; a negator up to three tokens
/// before a cue flips it.
class LexiconSentimentClassifier final : public SentimentPort {
public:
    static constexpr std::size_t kNegationWindow = 3;

    explicit LexiconSentimentClassifier(detail::PerLanguage cues) : cues_(std::move(cues)) {
        for (auto lang : kNativeLanguages) {
            for (const auto& e : cues_.at(LanguageCode::from_tag(lang)).entries()) {
                const auto& l = e.payload.label;
                if (l != "positive" && l != "negative" && l != "negator") {
                    throw Error(Errc::schema_error, "unknown sentiment cue label '" + l + "'");
                }
            }
        }
    }

    SentimentPolarity predict(const SentenceQuery& q) const override {
        detail::require_tokens(q.sentence);
        const auto matches = cues_.at(q.language).match(q.sentence.tokens, detail::lemma_of);
        std::vector<std::size_t> negators;
        for (const auto& m : matches) {
            if (m.entry->payload.label == "negator") negators.push_back(m.begin);
        }
        double balance = 0.0;
        for (const auto& m : matches) {
            const auto& label = m.entry->payload.label;
            if (label == "negator") continue;
            double w = label == "positive" ? m.entry->payload.weight : -m.entry->payload.weight;
            const bool negated = std::any_of(negators.begin(), negators.end(), [&](std::size_t n) {
                return n < m.begin && m.begin - n <= kNegationWindow;
            });
            if (negated) w = -w;
            balance += w;
        }
        if (balance > 0.0) return SentimentPolarity::positive;
        if (balance < 0.0) return SentimentPolarity::negative;
        return SentimentPolarity::neutral;
    }

    std::string name() const override { return "lexicon"; }
    std::string label_scheme() const override { return "polarity-3"; }

private:
    detail::PerLanguage cues_;
};

// ------------------------------------------------------------------- topics

struct TopicCatalog {
    std::vector<std::string> names;
    CueLexicon keywords;  // label = topic name

    static TopicCatalog load(const std::filesystem::path& path) {
        TopicCatalog c;
        c.keywords = load_cue_lexicon(path);
        for (const auto& e : c.keywords.entries()) {
            if (std::find(c.names.begin(), c.names.end(), e.payload.label) == c.names.end()) {
                c.names.push_back(e.payload.label);
            }
        }
        return c;
    }

    std::size_t id_of(const std::string& name) const {
        return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
    }
};

/// Picks the topic with the highest weighted keyword overlap; ties go to
/// the lower topic id, zero overlap yields no topic.
class KeywordTopicAssigner final : public TopicPort {
public:
    explicit KeywordTopicAssigner(std::map<Clustering, TopicCatalog> catalogs) : catalogs_(std::move(catalogs)) {}

    static KeywordTopicAssigner load(const std::filesystem::path& topic_dir) {
        std::map<Clustering, TopicCatalog> catalogs;
        for (auto c : {Clustering::pedagogy_specific, Clustering::general_educational}) {
            catalogs[c] = TopicCatalog::load(topic_dir / (std::string(to_string(c)) + ".tsv"));
        }
        return KeywordTopicAssigner(std::move(catalogs));
    }

    const TopicCatalog& catalog(Clustering c) const {
        const auto it = catalogs_.find(c);
        if (it == catalogs_.end()) throw Error(Errc::unknown_clustering, "no catalog for " + std::string(to_string(c)));
        return it->second;
    }

    TopicAssignment predict(const SentenceQuery& q) const override {
        detail::require_tokens(q.sentence);
        const auto& cat = catalog(q.clustering);
        std::vector<double> scores(cat.names.size(), 0.0);
        std::vector<std::vector<std::string>> terms(cat.names.size());
        for (const auto& m : cat.keywords.match(q.sentence.tokens, detail::lemma_of)) {
            const auto id = cat.id_of(m.entry->payload.label);
            scores[id] += m.entry->payload.weight;
            terms[id].push_back(detail::join_surfaces(q.sentence.tokens, m.begin, m.end));
        }
        TopicAssignment out;
        out.clustering = q.clustering;
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i] > scores[best]) best = i;
        }
        if (!scores.empty() && scores[best] > 0.0) {
            out.topic_id = best;
            out.matched_terms = std::move(terms[best]);
        }
        return out;
    }

    std::string name() const override { return "keyword"; }
    std::string label_scheme() const override { return "topic-catalogs"; }

private:
    std::map<Clustering, TopicCatalog> catalogs_;
};

// -------------------------------------------------------- reflective level

/// Ordinal ladder over per-sentence Gibbs argmax:
///   2  some sentence is evaluation
///   3  at least two analysis sentences and a perspective-contrast cue
///   4  level 3 and at least one future_plans sentence
///   5  level 4 and a wider-context (social/political/historical) cue
/// otherwise 1. Every condition is existential, so adding sentences never
/// lowers the result.
class LadderLevelClassifier final : public LevelPort {
public:
    explicit LadderLevelClassifier(detail::PerLanguage cues) : cues_(std::move(cues)) {
        for (auto lang : kNativeLanguages) {
            for (const auto& e : cues_.at(LanguageCode::from_tag(lang)).entries()) {
                if (e.payload.label != "contrast" && e.payload.label != "wider_context") {
                    throw Error(Errc::schema_error, "unknown level cue label '" + e.payload.label + "'");
                }
            }
        }
    }

    ReflectiveLevel predict(const AnalyzedDocument& doc) const override {
        if (doc.sentences.empty()) throw Error(Errc::empty_document, "no sentences to grade");
        std::array<std::size_t, kGibbsPhaseCount> histogram{};
        bool contrast = false;
        bool wider = false;
        const auto& lex = cues_.at(doc.language);
        for (const auto& s : doc.sentences) {
            ++histogram[index_of(s.gibbs.argmax())];
            for (const auto& m : lex.match(s.sentence.tokens, detail::lemma_of)) {
                if (m.entry->payload.label == "contrast") contrast = true;
                if (m.entry->payload.label == "wider_context") wider = true;
            }
        }
        const bool dialogical = histogram[index_of(GibbsPhase::analysis)] >= 2 && contrast;
        const bool transformative = dialogical && histogram[index_of(GibbsPhase::future_plans)] >= 1;
        if (transformative && wider) return ReflectiveLevel::critical_reflection;
        if (transformative) return ReflectiveLevel::transformative_reflection;
        if (dialogical) return ReflectiveLevel::dialogical_reflection;
        if (histogram[index_of(GibbsPhase::evaluation)] >= 1) return ReflectiveLevel::reflective_description;
        return ReflectiveLevel::description;
    }

    std::string name() const override { return "ladder"; }
    std::string label_scheme() const override { return "levels-5"; }

private:
    detail::PerLanguage cues_;
};

/// All baseline backends loaded from one data directory.
struct BaselineBackends {
    std::shared_ptr<const EmotionPort> emotion;
    std::shared_ptr<const GibbsPort> gibbs;
    std::shared_ptr<const SentimentPort> sentiment;
    std::shared_ptr<const TopicPort> topic;
    std::shared_ptr<const LevelPort> level;

    static BaselineBackends load(const std::filesystem::path& data_dir) {
        const auto cues = data_dir / "cues";
        BaselineBackends b;
        b.emotion = std::make_shared<LexiconEmotionClassifier>(detail::PerLanguage::load(cues, "emotions"));
        b.gibbs = std::make_shared<LexiconGibbsClassifier>(detail::PerLanguage::load(cues, "gibbs"),
                                                           detail::PerLanguage::load(cues, "emotions"));
        b.sentiment = std::make_shared<LexiconSentimentClassifier>(detail::PerLanguage::load(cues, "sentiment"));
        b.topic = std::make_shared<KeywordTopicAssigner>(KeywordTopicAssigner::load(data_dir / "topics"));
        b.level = std::make_shared<LadderLevelClassifier>(detail::PerLanguage::load(cues, "levels"));
        return b;
    }
};

}  // namespace reflect
