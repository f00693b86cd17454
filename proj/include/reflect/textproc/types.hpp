#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reflect/core/error.hpp"

namespace reflect {

/// Language of a submission. German is the pivot language; de/en/es have
/// native lexicons and templates, everything else is `other` with its
/// lowercase ISO-639-1 tag.
class LanguageCode {
public:
    enum class Kind { de, en, es, other };

    LanguageCode() : tag_("de") {}

    static LanguageCode from_tag(std::string_view tag) {
        if (tag.size() != 2 || tag[0] < 'a' || tag[0] > 'z' || tag[1] < 'a' || tag[1] > 'z') {
            throw Error(Errc::unsupported_language, "language tag must be two lowercase letters: '" +
                                                         std::string(tag) + "'");
        }
        LanguageCode code;
        code.tag_ = std::string(tag);
        return code;
    }

    static LanguageCode de() { return from_tag("de"); }
    static LanguageCode en() { return from_tag("en"); }
    static LanguageCode es() { return from_tag("es"); }

    Kind kind() const noexcept {
        if (tag_ == "de") return Kind::de;
        if (tag_ == "en") return Kind::en;
        if (tag_ == "es") return Kind::es;
        return Kind::other;
    }

    /// True for languages with native lexicons and templates.
    bool native() const noexcept { return kind() != Kind::other; }

    const std::string& tag() const noexcept { return tag_; }

    friend bool operator==(const LanguageCode&, const LanguageCode&) = default;
    friend auto operator<=>(const LanguageCode&, const LanguageCode&) = default;

private:
    std::string tag_;
};

inline constexpr std::array<std::string_view, 3> kNativeLanguages{"de", "en", "es"};

enum class PosTag {
    NOUN,
    VERB,
    AUX_VERB,
    MODAL_VERB,
    ADJ,
    ADV,
    PRON,
    DET,
    ADP,
    CONJ_COORD,
    CONJ_SUBORD,
    NUM,
    PUNCT,
    PART,
    OTHER,
};

inline constexpr std::array<PosTag, 15> kAllPosTags{
    PosTag::NOUN, PosTag::VERB,       PosTag::AUX_VERB,    PosTag::MODAL_VERB, PosTag::ADJ,
    PosTag::ADV,  PosTag::PRON,       PosTag::DET,         PosTag::ADP,        PosTag::CONJ_COORD,
    PosTag::CONJ_SUBORD, PosTag::NUM, PosTag::PUNCT,       PosTag::PART,       PosTag::OTHER,
};

constexpr std::string_view to_string(PosTag tag) noexcept {
    switch (tag) {
        case PosTag::NOUN: return "NOUN";
        case PosTag::VERB: return "VERB";
        case PosTag::AUX_VERB: return "AUX_VERB";
        case PosTag::MODAL_VERB: return "MODAL_VERB";
        case PosTag::ADJ: return "ADJ";
        case PosTag::ADV: return "ADV";
        case PosTag::PRON: return "PRON";
        case PosTag::DET: return "DET";
        case PosTag::ADP: return "ADP";
        case PosTag::CONJ_COORD: return "CONJ_COORD";
        case PosTag::CONJ_SUBORD: return "CONJ_SUBORD";
        case PosTag::NUM: return "NUM";
        case PosTag::PUNCT: return "PUNCT";
        case PosTag::PART: return "PART";
        case PosTag::OTHER: return "OTHER";
    }
    return "OTHER";
}

inline std::optional<PosTag> parse_pos_tag(std::string_view s) noexcept {
    for (auto tag : kAllPosTags) {
        if (to_string(tag) == s) return tag;
    }
    return std::nullopt;
}

constexpr bool is_verb(PosTag tag) noexcept {
    return tag == PosTag::VERB || tag == PosTag::AUX_VERB || tag == PosTag::MODAL_VERB;
}

/// Subordinate clause taxonomy shared by the tagger, the connector lexicon
/// and the linguistic profile.
enum class ClauseType { causal, temporal, conditional, concessive, relative, complement, other };

inline constexpr std::array<ClauseType, 7> kAllClauseTypes{
    ClauseType::causal,   ClauseType::temporal,   ClauseType::conditional, ClauseType::concessive,
    ClauseType::relative, ClauseType::complement, ClauseType::other,
};

constexpr std::string_view to_string(ClauseType t) noexcept {
    switch (t) {
        case ClauseType::causal: return "causal";
        case ClauseType::temporal: return "temporal";
        case ClauseType::conditional: return "conditional";
        case ClauseType::concessive: return "concessive";
        case ClauseType::relative: return "relative";
        case ClauseType::complement: return "complement";
        case ClauseType::other: return "other";
    }
    return "other";
}

inline std::optional<ClauseType> parse_clause_type(std::string_view s) noexcept {
    for (auto t : kAllClauseTypes) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

/// Half-open byte range [begin, end) into the source text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
    std::string surface;
    std::string lemma;
    PosTag pos = PosTag::OTHER;
    Span span;
};

struct Sentence {
    std::size_t index = 0;
    Span span;
    std::vector<Token> tokens;
};

struct RawSubmission {
    std::string text;
    std::chrono::system_clock::time_point submitted_at{};
    std::string author_id;
    std::optional<LanguageCode> requested_feedback_language;
};

}  // namespace reflect
