#pragma once

// Surface linguistic profile: length, expressivity (adverb/verb,
// adjective/noun), variability (lemma type/token ratio), structure
// (simple vs complex sentences, subordinate clause types) and coherence
// (discourse connectors).

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/textproc/tagger.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

using ConnectorLexicon = PhraseLexicon<ClauseType>;

/// connectives.<lang>.tsv: `connective<TAB>category`, multi-word entries
/// separated by spaces.
inline ConnectorLexicon load_connector_lexicon(const std::filesystem::path& path) {
    ConnectorLexicon lex;
    for (const auto& row : read_tsv(path)) {
        if (row.size() < 2) throw Error(Errc::schema_error, "connective line needs a category in " + path.string());
        const auto type = parse_clause_type(row[1]);
        if (!type) throw Error(Errc::schema_error, "unknown connective category '" + row[1] + "' in " + path.string());
        lex.add(row[0], *type);
    }
    return lex;
}

using ClauseCounts = std::map<ClauseType, std::size_t>;

struct ConnectorCount {
    std::size_t total = 0;
    ClauseCounts by_category;
};

enum class Complexity { simple, complex };

struct SentenceComplexity {
    Complexity complexity = Complexity::simple;
    std::multiset<ClauseType> clause_types;
};

struct LinguisticProfile {
    std::size_t token_count = 0;  // word tokens, punctuation excluded
    std::size_t sentence_count = 0;
    double mean_sentence_length = 0.0;
    double adverb_verb_ratio = 0.0;
    double adjective_noun_ratio = 0.0;
    bool adverb_verb_undefined = false;     // no verbs: ratio reported as 0
    bool adjective_noun_undefined = false;  // no nouns: ratio reported as 0
    std::size_t simple_sentence_count = 0;
    std::size_t complex_sentence_count = 0;
    ClauseCounts subordinate_clause_counts;  // every ClauseType present, possibly 0
    std::size_t connector_count = 0;
    ClauseCounts connectors_by_category;
    double connector_density = 0.0;
    double lexical_variability = 0.0;

    bool undefined_ratio() const noexcept { return adverb_verb_undefined || adjective_noun_undefined; }
};

inline ClauseCounts empty_clause_counts() {
    ClauseCounts c;
    for (auto t : kAllClauseTypes) c[t] = 0;
    return c;
}

/// Counts connective-lexicon matches on token lemmas, greedily and left to
/// right within each sentence, so multi-word connectives count once.
inline ConnectorCount count_connectors(std::span<const Sentence> sentences, const ConnectorLexicon& lexicon) {
    if (lexicon.empty()) throw Error(Errc::missing_lexicon, "connective lexicon is empty");
    ConnectorCount out;
    out.by_category = empty_clause_counts();
    for (const auto& s : sentences) {
        for (const auto& m : lexicon.match(s.tokens, [](const Token& t) -> std::string_view { return t.lemma; })) {
            ++out.total;
            ++out.by_category[m.entry->payload];
        }
    }
    return out;
}

/// Finite verb estimate. Within one clause segment (split at punctuation
/// and conjunctions) an auxiliary or modal heads the verb group, so the
/// participle or infinitive it governs is not counted again.
inline std::size_t count_finite_verbs(const Sentence& sentence) {
    std::size_t finite = 0;
    bool group_open = false;
    for (const auto& t : sentence.tokens) {
        if (t.pos == PosTag::PUNCT || t.pos == PosTag::CONJ_COORD || t.pos == PosTag::CONJ_SUBORD) {
            group_open = false;
            continue;
        }
        if (t.pos == PosTag::AUX_VERB || t.pos == PosTag::MODAL_VERB) {
            ++finite;
            group_open = true;
        } else if (t.pos == PosTag::VERB && !group_open) {
            ++finite;
        }
    }
    return finite;
}

/// Complex iff the sentence has a subordinator or at least two finite
/// verbs.
inline SentenceComplexity classify_sentence_complexity(const Sentence& sentence, const TaggerLexicon& lexicon) {
    SentenceComplexity out;
    for (const auto& t : sentence.tokens) {
        if (t.pos == PosTag::CONJ_SUBORD) out.clause_types.insert(lexicon.clause_type(t.lemma).value_or(ClauseType::other));
    }
    const auto verbs = count_finite_verbs(sentence);
    out.complexity = (!out.clause_types.empty() || verbs >= 2) ? Complexity::complex : Complexity::simple;
    return out;
}

inline LinguisticProfile score_document(std::span<const Sentence> sentences, const TaggerLexicon& tagger_lexicon,
                                        const ConnectorLexicon& connectors) {
    if (sentences.empty()) throw Error(Errc::empty_document, "no sentences to score");
    LinguisticProfile p;
    p.sentence_count = sentences.size();
    p.subordinate_clause_counts = empty_clause_counts();

    std::size_t verbs = 0, adverbs = 0, nouns = 0, adjectives = 0;
    std::unordered_set<std::string> word_types, all_types;
    std::size_t all_tokens = 0;
    for (const auto& s : sentences) {
        if (s.tokens.empty()) throw Error(Errc::empty_document, "sentence " + std::to_string(s.index) + " has no tokens");
        for (const auto& t : s.tokens) {
            ++all_tokens;
            all_types.insert(t.lemma);
            if (t.pos == PosTag::PUNCT) continue;
            ++p.token_count;
            word_types.insert(t.lemma);
            if (is_verb(t.pos)) ++verbs;
            if (t.pos == PosTag::ADV) ++adverbs;
            if (t.pos == PosTag::NOUN) ++nouns;
            if (t.pos == PosTag::ADJ) ++adjectives;
        }
        const auto c = classify_sentence_complexity(s, tagger_lexicon);
        if (c.complexity == Complexity::complex) {
            ++p.complex_sentence_count;
        } else {
            ++p.simple_sentence_count;
        }
        for (auto type : c.clause_types) ++p.subordinate_clause_counts[type];
    }

    p.mean_sentence_length = static_cast<double>(p.token_count) / static_cast<double>(p.sentence_count);
    p.adverb_verb_undefined = verbs == 0;
    p.adverb_verb_ratio = verbs == 0 ? 0.0 : static_cast<double>(adverbs) / static_cast<double>(verbs);
    p.adjective_noun_undefined = nouns == 0;
    p.adjective_noun_ratio = nouns == 0 ? 0.0 : static_cast<double>(adjectives) / static_cast<double>(nouns);

    const auto cc = count_connectors(sentences, connectors);
    p.connector_count = cc.total;
    p.connectors_by_category = cc.by_category;
    p.connector_density = static_cast<double>(cc.total) / static_cast<double>(p.sentence_count);

    // Punctuation-only documents fall back to all tokens so the ratio stays
    // within (0, 1].
    p.lexical_variability = p.token_count > 0
                                ? static_cast<double>(word_types.size()) / static_cast<double>(p.token_count)
                                : static_cast<double>(all_types.size()) / static_cast<double>(all_tokens);
    return p;
}

/// Per-language lexicons for scoring.
class LinguisticScorer {
public:
    static LinguisticScorer load(const std::filesystem::path& lexicon_dir, const Tagger& tagger) {
        LinguisticScorer s;
        for (auto lang : kNativeLanguages) {
            const auto code = LanguageCode::from_tag(lang);
            s.tagger_lexicons_[code.tag()] = &tagger.lexicon(code);
            s.connectors_[code.tag()] =
                load_connector_lexicon(lexicon_dir / ("connectives." + std::string(lang) + ".tsv"));
        }
        return s;
    }

    LinguisticProfile score(std::span<const Sentence> sentences, const LanguageCode& lang) const {
        return score_document(sentences, tagger_lexicon(lang), connectors(lang));
    }

    SentenceComplexity classify(const Sentence& s, const LanguageCode& lang) const {
        return classify_sentence_complexity(s, tagger_lexicon(lang));
    }

    ConnectorCount count(std::span<const Sentence> sentences, const LanguageCode& lang) const {
        return count_connectors(sentences, connectors(lang));
    }

    const ConnectorLexicon& connectors(const LanguageCode& lang) const {
        const auto it = connectors_.find(lang.tag());
        if (it == connectors_.end()) throw Error(Errc::missing_lexicon, "no connective lexicon for '" + lang.tag() + "'");
        return it->second;
    }

private:
    const TaggerLexicon& tagger_lexicon(const LanguageCode& lang) const {
        const auto it = tagger_lexicons_.find(lang.tag());
        if (it == tagger_lexicons_.end()) throw Error(Errc::unsupported_language, "no lexicon for '" + lang.tag() + "'");
        return *it->second;
    }

    std::map<std::string, const TaggerLexicon*> tagger_lexicons_;
    std::map<std::string, ConnectorLexicon> connectors_;
};

}  // namespace reflect
