#pragma once

// Prompt database: trigger-conditioned feedback prompts with de/en/es
// phrasing variants, plus the per-language message frame.
//
//   {
//     "frame":   { "<lang>": { "greeting", "strengths_phase", "strengths_topics",
//                              "improvements", "closing",
//                              "phases": {<phase>: name}, "levels": {"1".."5": name} } },
//     "records": [ { "id", "trigger", "variants": {"de": [..], "en": [..], "es": [..]},
//                    "placeholders": [..] } ]
//   }

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reflect/classifiers/labels.hpp"
#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

// ------------------------------------------------------------ trigger tags

namespace trigger {

inline constexpr std::array<std::string_view, 4> kLinguisticRules{"brevity", "coherence", "expressivity",
                                                                  "variability"};

inline std::string gibbs_missing(GibbsPhase p) { return "gibbs_missing:" + std::string(to_string(p)); }
inline std::string linguistic(std::string_view rule) { return "linguistic:" + std::string(rule); }
inline std::string level(int n) { return "level:" + std::to_string(n); }
inline const std::string challenge = "sentiment:challenge";
inline const std::string optimism = "sentiment:optimism";

/// True for every syntactically valid tag, reachable or not.
inline bool is_valid(std::string_view tag) {
    for (auto p : kGibbsPhases) {
        if (tag == gibbs_missing(p)) return true;
    }
    for (auto r : kLinguisticRules) {
        if (tag == linguistic(r)) return true;
    }
    for (int n = 1; n <= 5; ++n) {
        if (tag == level(n)) return true;
    }
    return tag == challenge || tag == optimism;
}

/// Tags the selector can emit. level:1 is unreachable: the level prompt
/// always targets one level above the current one.
inline std::vector<std::string> reachable() {
    std::vector<std::string> out;
    for (auto p : kGibbsPhases) out.push_back(gibbs_missing(p));
    for (auto r : kLinguisticRules) out.push_back(linguistic(r));
    out.push_back(challenge);
    out.push_back(optimism);
    for (int n = 2; n <= 5; ++n) out.push_back(level(n));
    return out;
}

}  // namespace trigger

/// Substitution keys the composer can fill from a profile.
inline const std::set<std::string, std::less<>>& known_placeholders() {
    static const std::set<std::string, std::less<>> keys{
        "sentence_count", "mean_sentence_length", "connector_count", "level",
        "target_level",   "topics",               "phase",
    };
    return keys;
}

/// `{key}` occurrences in `text`, in order.
inline std::vector<std::string> placeholders_in(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string_view::npos) {
        const auto close = text.find('}', pos + 1);
        if (close == std::string_view::npos) break;
        const auto key = text.substr(pos + 1, close - pos - 1);
        const bool ident = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
            return (c >= 'a' && c <= 'z') || c == '_';
        });
        if (ident) out.emplace_back(key);
        pos = close + 1;
    }
    return out;
}

// ----------------------------------------------------------------- records

struct PromptRecord {
    std::string id;
    std::string trigger;
    std::map<std::string, std::vector<std::string>> variants;  // language tag -> phrasings
    std::vector<std::string> placeholders;

    const std::vector<std::string>& variants_for(const LanguageCode& lang) const {
        const auto it = variants.find(lang.tag());
        if (it == variants.end() || it->second.empty()) {
            throw Error(Errc::prompt_gap, "record '" + id + "' has no '" + lang.tag() + "' variants");
        }
        return it->second;
    }

    /// Variant count usable across all native languages.
    std::size_t parallel_variant_count() const {
        std::size_t n = 0;
        bool first = true;
        for (auto lang : kNativeLanguages) {
            const auto it = variants.find(std::string(lang));
            const std::size_t c = it == variants.end() ? 0 : it->second.size();
            n = first ? c : std::min(n, c);
            first = false;
        }
        return n;
    }
};

struct MessageFrame {
    std::string greeting;
    std::string strengths_phase;   // uses {phase}
    std::string strengths_topics;  // uses {topics}
    std::string improvements;
    std::string closing;
    std::map<GibbsPhase, std::string> phases;
    std::map<int, std::string> levels;
};

struct Diagnostic {
    std::string subject;  // record id, trigger tag or "frame:<lang>"
    std::string message;
};

class PromptDb {
public:
    static PromptDb parse(std::string_view json_text) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(Errc::schema_error, std::string("prompt DB is not valid JSON: ") + e.what());
        }
        return from_json(j);
    }

    static PromptDb load(const std::filesystem::path& path) { return parse(read_file(path, Errc::schema_error)); }

    static PromptDb from_json(const nlohmann::json& j) {
        PromptDb db;
        try {
            if (!j.is_object() || !j.contains("records") || !j.at("records").is_array()) {
                throw Error(Errc::schema_error, "prompt DB needs a 'records' array");
            }
            for (const auto& r : j.at("records")) {
                PromptRecord rec;
                rec.id = r.at("id").get<std::string>();
                rec.trigger = r.at("trigger").get<std::string>();
                for (const auto& [lang, list] : r.at("variants").items()) {
                    rec.variants[lang] = list.get<std::vector<std::string>>();
                }
                if (r.contains("placeholders")) rec.placeholders = r.at("placeholders").get<std::vector<std::string>>();
                db.records_.push_back(std::move(rec));
            }
            if (j.contains("frame")) {
                for (const auto& [lang, f] : j.at("frame").items()) {
                    MessageFrame frame;
                    frame.greeting = f.at("greeting").get<std::string>();
                    frame.strengths_phase = f.at("strengths_phase").get<std::string>();
                    frame.strengths_topics = f.at("strengths_topics").get<std::string>();
                    frame.improvements = f.at("improvements").get<std::string>();
                    frame.closing = f.at("closing").get<std::string>();
                    for (const auto& [phase, name] : f.at("phases").items()) {
                        const auto p = parse_gibbs_phase(phase);
                        if (!p) throw Error(Errc::schema_error, "frame '" + lang + "': unknown phase '" + phase + "'");
                        frame.phases[*p] = name.get<std::string>();
                    }
                    for (const auto& [level, name] : f.at("levels").items()) {
                        frame.levels[std::stoi(level)] = name.get<std::string>();
                    }
                    db.frames_[lang] = std::move(frame);
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::schema_error, std::string("prompt DB schema: ") + e.what());
        } catch (const std::invalid_argument&) {
            throw Error(Errc::schema_error, "prompt DB schema: level keys must be integers");
        }
        return db;
    }

    const std::vector<PromptRecord>& records() const noexcept { return records_; }

    /// First record (file order) for a trigger.
    const PromptRecord* find_by_trigger(std::string_view tag) const {
        const auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.trigger == tag; });
        return it == records_.end() ? nullptr : &*it;
    }

    const PromptRecord& at(std::string_view id) const {
        const auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.id == id; });
        if (it == records_.end()) throw Error(Errc::prompt_gap, "no prompt record '" + std::string(id) + "'");
        return *it;
    }

    const MessageFrame& frame(const LanguageCode& lang) const {
        const auto it = frames_.find(lang.tag());
        if (it == frames_.end()) throw Error(Errc::prompt_gap, "no message frame for '" + lang.tag() + "'");
        return it->second;
    }

    /// Structural problems that make the DB unusable: a record without
    /// one of the native languages or with an empty variant list.
    std::vector<Diagnostic> structural_problems() const {
        std::vector<Diagnostic> out;
        for (const auto& r : records_) {
            for (auto lang : kNativeLanguages) {
                const auto it = r.variants.find(std::string(lang));
                if (it == r.variants.end()) {
                    out.push_back({r.id, "missing '" + std::string(lang) + "' variants"});
                } else if (it->second.empty()) {
                    out.push_back({r.id, "empty '" + std::string(lang) + "' variant list"});
                }
            }
        }
        return out;
    }

    /// Throws PromptGap naming the first structural problem.
    const PromptDb& validate() const {
        const auto problems = structural_problems();
        if (!problems.empty()) {
            throw Error(Errc::prompt_gap, "record '" + problems.front().subject + "': " + problems.front().message);
        }
        return *this;
    }

    /// Full completeness check: structure, at least two variants per
    /// language, declared placeholders, coverage of every reachable trigger,
    /// and a complete frame per native language.
    std::vector<Diagnostic> lint() const {
        auto out = structural_problems();
        std::set<std::string> ids;
        for (const auto& r : records_) {
            if (!ids.insert(r.id).second) out.push_back({r.id, "duplicate record id"});
            if (!trigger::is_valid(r.trigger)) out.push_back({r.id, "unknown trigger '" + r.trigger + "'"});
            for (const auto& key : r.placeholders) {
                if (!known_placeholders().contains(key)) out.push_back({r.id, "unknown placeholder '" + key + "'"});
            }
            for (const auto& [lang, list] : r.variants) {
                if (!list.empty() && list.size() < 2) {
                    out.push_back({r.id, "'" + lang + "' has " + std::to_string(list.size()) + " variant, need at least 2"});
                }
                for (const auto& text : list) {
                    if (utf8::trim(text).empty()) out.push_back({r.id, "blank '" + lang + "' variant"});
                    for (const auto& key : placeholders_in(text)) {
                        if (std::find(r.placeholders.begin(), r.placeholders.end(), key) == r.placeholders.end()) {
                            out.push_back({r.id, "undeclared placeholder '{" + key + "}' in '" + lang + "' variant"});
                        }
                    }
                }
            }
        }
        for (const auto& tag : trigger::reachable()) {
            if (find_by_trigger(tag) == nullptr) out.push_back({tag, "no record for reachable trigger"});
        }
        for (auto lang : kNativeLanguages) {
            const auto it = frames_.find(std::string(lang));
            const std::string subject = "frame:" + std::string(lang);
            if (it == frames_.end()) {
                out.push_back({subject, "missing message frame"});
                continue;
            }
            const auto& f = it->second;
            for (auto p : kGibbsPhases) {
                if (!f.phases.contains(p)) out.push_back({subject, "no name for phase '" + std::string(to_string(p)) + "'"});
            }
            for (int n = 1; n <= 5; ++n) {
                if (!f.levels.contains(n)) out.push_back({subject, "no name for level " + std::to_string(n)});
            }
        }
        return out;
    }

private:
    std::vector<PromptRecord> records_;
    std::map<std::string, MessageFrame> frames_;
};

}  // namespace reflect
