#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reflect/classifiers/labels.hpp"
#include "reflect/core/error.hpp"
#include "reflect/reasoner/profile.hpp"
#include "reflect/reasoner/prompt_db.hpp"
#include "reflect/textproc/translate.hpp"

namespace reflect {

// ---------------------------------------------------------------- selection

enum class PresenceMode { top1, top3 };

/// Linguistic under-representation thresholds. A rule fires when the
/// profile value is strictly below its threshold.
struct SelectionConfig {
    double min_mean_sentence_length = 8.0;
    double min_connector_density = 0.34;
    double min_expressivity_ratio = 0.1;  // both adverb/verb and adjective/noun below
    double min_lexical_variability = 0.4;
    PresenceMode presence = PresenceMode::top1;
};

struct PlanItem {
    std::string record_id;
    std::string trigger;
    std::size_t variant_index = 0;

    friend bool operator==(const PlanItem&, const PlanItem&) = default;
};

struct FeedbackPlan {
    std::vector<PlanItem> selected;
    std::uint64_t seed = 0;

    friend bool operator==(const FeedbackPlan&, const FeedbackPlan&) = default;
};

/// The three least present phases, lowest first; ties keep declaration
/// order.
inline std::array<GibbsPhase, 3> least_present_phases(const TextProfile& profile, PresenceMode mode = PresenceMode::top1) {
    const auto& presence = mode == PresenceMode::top1 ? profile.gibbs_coverage : profile.gibbs_top3_presence;
    std::array<GibbsPhase, kGibbsPhaseCount> phases = kGibbsPhases;
    std::stable_sort(phases.begin(), phases.end(),
                     [&](GibbsPhase a, GibbsPhase b) { return presence[index_of(a)] < presence[index_of(b)]; });
    return {phases[0], phases[1], phases[2]};
}

inline std::vector<std::string> triggered_linguistic_rules(const LinguisticProfile& l, const SelectionConfig& c) {
    std::vector<std::string> out;
    if (l.mean_sentence_length < c.min_mean_sentence_length) out.emplace_back("brevity");
    if (l.connector_density < c.min_connector_density) out.emplace_back("coherence");
    if (l.adjective_noun_ratio < c.min_expressivity_ratio && l.adverb_verb_ratio < c.min_expressivity_ratio) {
        out.emplace_back("expressivity");
    }
    if (l.lexical_variability < c.min_lexical_variability) out.emplace_back("variability");
    return out;
}

/// Ordered trigger tags for a profile: three Gibbs gaps, linguistic rules,
/// at most one sentiment prompt, one level prompt.
inline std::vector<std::string> plan_triggers(const TextProfile& profile, const SelectionConfig& config = {}) {
    std::vector<std::string> tags;
    for (auto p : least_present_phases(profile, config.presence)) tags.push_back(trigger::gibbs_missing(p));
    for (const auto& rule : triggered_linguistic_rules(profile.linguistic, config)) tags.push_back(trigger::linguistic(rule));
    if (profile.sentiment_summary == SentimentSummary::all_positive) tags.push_back(trigger::challenge);
    if (profile.sentiment_summary == SentimentSummary::all_negative) tags.push_back(trigger::optimism);
    tags.push_back(trigger::level(std::min(to_int(profile.reflective_level) + 1, 5)));
    return tags;
}

/// One record per trigger, variant drawn from a generator seeded with
/// `seed`. Variant indices range over the variant count shared by all
/// native languages so a plan renders in any of them.
inline FeedbackPlan select_prompts(const TextProfile& profile, const PromptDb& db, std::uint64_t seed,
                                   const SelectionConfig& config = {}) {
    FeedbackPlan plan;
    plan.seed = seed;
    std::mt19937_64 rng(seed);
    for (const auto& tag : plan_triggers(profile, config)) {
        const PromptRecord* rec = db.find_by_trigger(tag);
        if (rec == nullptr) throw Error(Errc::prompt_gap, "no prompt record for trigger '" + tag + "'");
        const std::size_t n = rec->parallel_variant_count();
        if (n == 0) throw Error(Errc::prompt_gap, "record '" + rec->id + "' has no usable variants");
        plan.selected.push_back({rec->id, tag, static_cast<std::size_t>(rng() % n)});
    }
    return plan;
}

// ------------------------------------------------------------- composition

inline constexpr int kFeatureVectorVersion = 1;
inline constexpr std::size_t kFeatureVectorSize = 12;

struct FeatureConfig {
    double sentence_length_cap = 30.0;
};

/// Radar layout: six Gibbs coverages in phase order, normalized mean
/// sentence length, adverb/verb, adjective/noun, connector density,
/// lexical variability, reflective level / 5. All entries in [0, 1].
inline std::array<double, kFeatureVectorSize> export_feature_vector(const TextProfile& p, const FeatureConfig& c = {}) {
    std::array<double, kFeatureVectorSize> v{};
    for (std::size_t i = 0; i < kGibbsPhaseCount; ++i) v[i] = std::clamp(p.gibbs_coverage[i], 0.0, 1.0);
    const auto& l = p.linguistic;
    v[6] = c.sentence_length_cap > 0.0 ? std::clamp(l.mean_sentence_length / c.sentence_length_cap, 0.0, 1.0) : 0.0;
    v[7] = std::clamp(l.adverb_verb_ratio, 0.0, 1.0);
    v[8] = std::clamp(l.adjective_noun_ratio, 0.0, 1.0);
    v[9] = std::clamp(l.connector_density, 0.0, 1.0);
    v[10] = std::clamp(l.lexical_variability, 0.0, 1.0);
    v[11] = static_cast<double>(to_int(p.reflective_level)) / 5.0;
    return v;
}

struct Annotation {
    std::string source;  // emotion | gibbs | sentiment | topic | linguistic
    std::string label;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct SentenceAnnotation {
    std::size_t sentence = 0;
    std::size_t start = 0;  // code point offsets into the analyzed text
    std::size_t end = 0;
    std::vector<Annotation> labels;

    friend bool operator==(const SentenceAnnotation&, const SentenceAnnotation&) = default;
};

struct FeedbackResponse {
    std::string text;
    std::array<double, kFeatureVectorSize> feature_vector{};
    int feature_vector_version = kFeatureVectorVersion;
    std::vector<SentenceAnnotation> annotations;
    LanguageCode language;
    ReflectiveLevel level = ReflectiveLevel::description;
    FeedbackPlan plan;
    bool translated = false;           // composed in German, then translated
    bool translator_fallback = false;  // translation backend unavailable
    bool persisted = true;

    friend bool operator==(const FeedbackResponse&, const FeedbackResponse&) = default;
};

namespace detail {

inline std::string format_fixed(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::map<std::string, std::string, std::less<>> placeholder_values(const TextProfile& p, const MessageFrame& f) {
    std::map<std::string, std::string, std::less<>> v;
    v["sentence_count"] = std::to_string(p.sentence_count);
    v["mean_sentence_length"] = format_fixed(p.linguistic.mean_sentence_length, 1);
    v["connector_count"] = std::to_string(p.linguistic.connector_count);
    const int level = to_int(p.reflective_level);
    const int target = std::min(level + 1, 5);
    if (auto it = f.levels.find(level); it != f.levels.end()) v["level"] = it->second;
    if (auto it = f.levels.find(target); it != f.levels.end()) v["target_level"] = it->second;
    if (auto it = f.phases.find(strongest_phase(p)); it != f.phases.end()) v["phase"] = it->second;
    std::string topics;
    for (const auto& t : p.topics) {
        if (!t.well_thought) continue;
        if (!topics.empty()) topics += ", ";
        topics += t.name;
    }
    if (!topics.empty()) v["topics"] = topics;
    return v;
}

inline std::string substitute(std::string_view text, const std::map<std::string, std::string, std::less<>>& values,
                              std::string_view owner) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto open = text.find('{', pos);
        if (open == std::string_view::npos) break;
        const auto close = text.find('}', open + 1);
        if (close == std::string_view::npos) break;
        const auto key = text.substr(open + 1, close - open - 1);
        out.append(text.substr(pos, open - pos));
        const auto it = values.find(key);
        if (it == values.end()) {
            throw Error(Errc::unresolved_placeholder, "'{" + std::string(key) + "}' in " + std::string(owner));
        }
        out += it->second;
        pos = close + 1;
    }
    out.append(text.substr(pos));
    return out;
}

}  // namespace detail

/// Renders `plan` with the native variants of `lang`.
inline std::string render_native(const FeedbackPlan& plan, const TextProfile& profile, const PromptDb& db,
                                 const LanguageCode& lang) {
    const auto& frame = db.frame(lang);
    const auto values = detail::placeholder_values(profile, frame);
    std::vector<std::string> lines;
    lines.push_back(detail::substitute(frame.greeting, values, "greeting"));
    if (values.contains("topics")) lines.push_back(detail::substitute(frame.strengths_topics, values, "strengths_topics"));
    lines.push_back(detail::substitute(frame.strengths_phase, values, "strengths_phase"));
    if (!plan.selected.empty()) lines.push_back(detail::substitute(frame.improvements, values, "improvements"));
    for (const auto& item : plan.selected) {
        const auto& variants = db.at(item.record_id).variants_for(lang);
        if (item.variant_index >= variants.size()) {
            throw Error(Errc::prompt_gap, "record '" + item.record_id + "' has no variant " +
                                              std::to_string(item.variant_index) + " for '" + lang.tag() + "'");
        }
        lines.push_back("- " + detail::substitute(variants[item.variant_index], values, item.record_id));
    }
    lines.push_back(detail::substitute(frame.closing, values, "closing"));
    std::string text;
    for (const auto& l : lines) {
        if (!text.empty()) text.push_back('\n');
        text += l;
    }
    return text;
}

/// Native composition for de/en/es; any other target is composed in German
/// and routed through the translator.
inline FeedbackResponse compose_feedback(const FeedbackPlan& plan, const TextProfile& profile, const PromptDb& db,
                                         const LanguageCode& target, const TranslatorPort& translator,
                                         const FeatureConfig& features = {}) {
    FeedbackResponse r;
    r.language = target;
    r.level = profile.reflective_level;
    r.plan = plan;
    r.feature_vector = export_feature_vector(profile, features);
    if (target.native()) {
        r.text = render_native(plan, profile, db, target);
    } else {
        const auto german = render_native(plan, profile, db, LanguageCode::de());
        auto t = translate_or_stub(german, LanguageCode::de(), target, translator);
        r.text = std::move(t.text);
        r.translated = true;
        r.translator_fallback = t.fell_back;
    }
    return r;
}

}  // namespace reflect
