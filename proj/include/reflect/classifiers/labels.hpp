#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reflect/core/error.hpp"

namespace reflect {

// ---------------------------------------------------------------- emotions

/// Eighteen annotated emotions plus `no_emotion`.
enum class EmotionLabel {
    information,
    annoyance,
    appreciation,
    disapproval_critique,
    interest,
    anticipation,
    excitement,
    challenged,
    confidence,
    disappointment,
    insecurity,
    motivation,
    optimism,
    responsibility,
    satisfaction,
    surprise,
    uncertainty,
    wariness,
    no_emotion,
};

inline constexpr std::size_t kEmotionCount = 19;

inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames{
    "information",  "annoyance",     "appreciation", "disapproval/critique", "interest",
    "anticipation", "excitement",    "challenged",   "confidence",           "disappointment",
    "insecurity",   "motivation",    "optimism",     "responsibility",       "satisfaction",
    "surprise",     "uncertainty",   "wariness",     "no-emotion",
};

constexpr std::string_view to_string(EmotionLabel l) noexcept { return kEmotionNames[static_cast<std::size_t>(l)]; }

inline std::optional<EmotionLabel> parse_emotion(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kEmotionCount; ++i) {
        if (kEmotionNames[i] == s) return static_cast<EmotionLabel>(i);
    }
    return std::nullopt;
}

inline std::vector<EmotionLabel> all_emotions() {
    std::vector<EmotionLabel> out;
    for (std::size_t i = 0; i < kEmotionCount; ++i) out.push_back(static_cast<EmotionLabel>(i));
    return out;
}

/// Invariant: `labels` is never empty and `no_emotion` never shares it.
struct EmotionPrediction {
    std::set<EmotionLabel> labels{EmotionLabel::no_emotion};
    std::map<EmotionLabel, double> scores;

    bool has(EmotionLabel l) const { return labels.contains(l); }
};

// ------------------------------------------------------------ gibbs phases

enum class GibbsPhase { description, feelings, evaluation, analysis, conclusion, future_plans };

inline constexpr std::size_t kGibbsPhaseCount = 6;

inline constexpr std::array<GibbsPhase, kGibbsPhaseCount> kGibbsPhases{
    GibbsPhase::description, GibbsPhase::feelings,   GibbsPhase::evaluation,
    GibbsPhase::analysis,    GibbsPhase::conclusion, GibbsPhase::future_plans,
};

inline constexpr std::array<std::string_view, kGibbsPhaseCount> kGibbsPhaseNames{
    "description", "feelings", "evaluation", "analysis", "conclusion", "future_plans",
};

constexpr std::string_view to_string(GibbsPhase p) noexcept { return kGibbsPhaseNames[static_cast<std::size_t>(p)]; }

inline std::optional<GibbsPhase> parse_gibbs_phase(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kGibbsPhaseCount; ++i) {
        if (kGibbsPhaseNames[i] == s) return kGibbsPhases[i];
    }
    return std::nullopt;
}

constexpr std::size_t index_of(GibbsPhase p) noexcept { return static_cast<std::size_t>(p); }

/// Probabilities over the six phases in declaration order.
class GibbsDistribution {
public:
    GibbsDistribution() { probabilities_.fill(1.0 / kGibbsPhaseCount); }

    /// Normalizes non-negative scores with a positive sum.
    static GibbsDistribution from_scores(const std::array<double, kGibbsPhaseCount>& scores) {
        double total = 0.0;
        for (double s : scores) {
            if (s < 0.0) throw Error(Errc::schema_error, "negative Gibbs score");
            total += s;
        }
        if (total <= 0.0) throw Error(Errc::schema_error, "Gibbs scores sum to zero");
        GibbsDistribution d;
        for (std::size_t i = 0; i < kGibbsPhaseCount; ++i) d.probabilities_[i] = scores[i] / total;
        return d;
    }

    double operator[](GibbsPhase p) const noexcept { return probabilities_[index_of(p)]; }
    const std::array<double, kGibbsPhaseCount>& probabilities() const noexcept { return probabilities_; }

    /// The k most probable phases; equal probabilities keep declaration order.
    std::vector<GibbsPhase> top_k(std::size_t k) const {
        std::vector<GibbsPhase> phases(kGibbsPhases.begin(), kGibbsPhases.end());
        std::stable_sort(phases.begin(), phases.end(),
                         [this](GibbsPhase a, GibbsPhase b) { return (*this)[a] > (*this)[b]; });
        phases.resize(std::min(k, phases.size()));
        return phases;
    }

    GibbsPhase argmax() const { return top_k(1).front(); }

private:
    std::array<double, kGibbsPhaseCount> probabilities_{};
};

// -------------------------------------------------------- reflective level

enum class ReflectiveLevel {
    description = 1,
    reflective_description = 2,
    dialogical_reflection = 3,
    transformative_reflection = 4,
    critical_reflection = 5,
};

inline constexpr std::array<std::string_view, 5> kLevelNames{
    "description", "reflective_description", "dialogical_reflection", "transformative_reflection",
    "critical_reflection",
};

constexpr int to_int(ReflectiveLevel l) noexcept { return static_cast<int>(l); }

inline ReflectiveLevel level_from_int(int n) {
    if (n < 1 || n > 5) throw Error(Errc::schema_error, "reflective level out of range: " + std::to_string(n));
    return static_cast<ReflectiveLevel>(n);
}

constexpr std::string_view to_string(ReflectiveLevel l) noexcept { return kLevelNames[to_int(l) - 1]; }

// ---------------------------------------------------------------- sentiment

enum class SentimentPolarity { positive, negative, neutral };

constexpr std::string_view to_string(SentimentPolarity s) noexcept {
    switch (s) {
        case SentimentPolarity::positive: return "positive";
        case SentimentPolarity::negative: return "negative";
        case SentimentPolarity::neutral: return "neutral";
    }
    return "neutral";
}

// ------------------------------------------------------------------- topics

enum class Clustering { pedagogy_specific, general_educational };

constexpr std::string_view to_string(Clustering c) noexcept {
    return c == Clustering::pedagogy_specific ? "pedagogy_specific" : "general_educational";
}

inline Clustering parse_clustering(std::string_view s) {
    if (s == "pedagogy_specific") return Clustering::pedagogy_specific;
    if (s == "general_educational") return Clustering::general_educational;
    throw Error(Errc::unknown_clustering, "unknown clustering '" + std::string(s) + "'");
}

/// Invariant: no topic ⇒ no matched terms.
struct TopicAssignment {
    Clustering clustering = Clustering::pedagogy_specific;
    std::optional<std::size_t> topic_id;
    std::vector<std::string> matched_terms;
};

}  // namespace reflect
