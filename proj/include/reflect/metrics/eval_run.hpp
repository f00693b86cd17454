#pragma once

// Gold vs prediction run comparison over JSON-lines files.
//
//   emotions: {"id": .., "labels": ["interest", ..]}
//   gibbs:    {"id": .., "label": "analysis"} and/or {"id": .., "top3": [..]}
//   level:    {"id": .., "level": 1..5}

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reflect/classifiers/labels.hpp"
#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/metrics/metrics.hpp"

namespace reflect::metrics {

enum class Task { emotions, gibbs, level };

inline std::string_view to_string(Task t) noexcept {
    switch (t) {
        case Task::emotions: return "emotions";
        case Task::gibbs: return "gibbs";
        case Task::level: return "level";
    }
    return "emotions";
}

inline Task parse_task(std::string_view s) {
    if (s == "emotions") return Task::emotions;
    if (s == "gibbs") return Task::gibbs;
    if (s == "level") return Task::level;
    throw Error(Errc::config_error, "unknown task '" + std::string(s) + "' (emotions, gibbs, level)");
}

enum class HammingMode { complement_of_loss, jaccard };

struct EvalConfig {
    std::size_t emotion_scheme_size = 18;
    SimilarityGroups<EmotionLabel> groups{{{EmotionLabel::disappointment, EmotionLabel::disapproval_critique}}};
    HammingMode hamming = HammingMode::complement_of_loss;
    int level_categories = 5;
};

struct EvalReport {
    std::map<std::string, double> values;
    std::size_t sample_count = 0;
    std::string label_scheme;
};

struct Record {
    std::string id;
    nlohmann::json body;
};

/// Parses JSON lines; blank lines are skipped. Every record needs a
/// string or integer `id`, unique within the file.
inline std::vector<Record> parse_jsonl(std::string_view content, std::string_view what) {
    std::vector<Record> out;
    std::set<std::string> seen;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (utf8::trim(line).empty()) continue;
        const auto where = std::string(what) + " line " + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw Error(Errc::schema_error, where + ": not valid JSON");
        }
        if (!j.is_object() || !j.contains("id")) throw Error(Errc::schema_error, where + ": record needs an 'id'");
        const auto& id = j.at("id");
        std::string key;
        if (id.is_string()) {
            key = id.get<std::string>();
        } else if (id.is_number_integer()) {
            key = std::to_string(id.get<long long>());
        } else {
            throw Error(Errc::schema_error, where + ": 'id' must be a string or integer");
        }
        if (!seen.insert(key).second) throw Error(Errc::schema_error, where + ": duplicate id '" + key + "'");
        out.push_back({std::move(key), std::move(j)});
    }
    if (out.empty()) throw Error(Errc::schema_error, std::string(what) + " has no records");
    return out;
}

/// Pairs gold and prediction records by id, in gold order.
inline std::vector<std::pair<const Record*, const Record*>> align(const std::vector<Record>& gold,
                                                                 const std::vector<Record>& pred) {
    std::map<std::string, const Record*> by_id;
    for (const auto& r : pred) by_id[r.id] = &r;
    std::vector<std::pair<const Record*, const Record*>> out;
    for (const auto& g : gold) {
        const auto it = by_id.find(g.id);
        if (it == by_id.end()) throw Error(Errc::id_mismatch, "id '" + g.id + "' has no prediction");
        out.emplace_back(&g, it->second);
        by_id.erase(it);
    }
    if (!by_id.empty()) throw Error(Errc::id_mismatch, "id '" + by_id.begin()->first + "' has no gold record");
    return out;
}

namespace detail {

inline std::string field_context(const Record& r, std::string_view field) {
    return "record '" + r.id + "' field '" + std::string(field) + "'";
}

inline std::set<EmotionLabel> emotion_labels(const Record& r) {
    const auto& j = r.body;
    if (!j.contains("labels") || !j.at("labels").is_array()) {
        throw Error(Errc::schema_error, field_context(r, "labels") + " missing or not a list");
    }
    std::set<EmotionLabel> out;
    for (const auto& v : j.at("labels")) {
        if (!v.is_string()) throw Error(Errc::schema_error, field_context(r, "labels") + " holds a non-string");
        const auto l = parse_emotion(v.get<std::string>());
        if (!l) throw Error(Errc::schema_error, field_context(r, "labels") + ": unknown emotion '" + v.get<std::string>() + "'");
        out.insert(*l);
    }
    if (out.empty()) throw Error(Errc::schema_error, field_context(r, "labels") + " is empty (use no-emotion)");
    return out;
}

inline GibbsPhase phase_value(const Record& r, const nlohmann::json& v, std::string_view field) {
    if (!v.is_string()) throw Error(Errc::schema_error, field_context(r, field) + " is not a string");
    const auto p = parse_gibbs_phase(v.get<std::string>());
    if (!p) throw Error(Errc::schema_error, field_context(r, field) + ": unknown phase '" + v.get<std::string>() + "'");
    return *p;
}

/// Ranked phases of a record: `top3` if present, else the single `label`.
inline std::vector<GibbsPhase> gibbs_ranking(const Record& r) {
    const auto& j = r.body;
    std::optional<GibbsPhase> label;
    if (j.contains("label")) label = phase_value(r, j.at("label"), "label");
    std::vector<GibbsPhase> ranked;
    if (j.contains("top3")) {
        if (!j.at("top3").is_array() || j.at("top3").empty() || j.at("top3").size() > 3) {
            throw Error(Errc::schema_error, field_context(r, "top3") + " must list one to three phases");
        }
        for (const auto& v : j.at("top3")) ranked.push_back(phase_value(r, v, "top3"));
        if (label && *label != ranked.front()) {
            throw Error(Errc::schema_error, "record '" + r.id + "': 'label' disagrees with top3[0]");
        }
    } else if (label) {
        ranked.push_back(*label);
    } else {
        throw Error(Errc::schema_error, "record '" + r.id + "' needs 'label' or 'top3'");
    }
    return ranked;
}

inline int level_value(const Record& r, int k) {
    const auto& j = r.body;
    if (!j.contains("level") || !j.at("level").is_number_integer()) {
        throw Error(Errc::schema_error, field_context(r, "level") + " missing or not an integer");
    }
    const int v = j.at("level").get<int>();
    if (v < 1 || v > k) throw Error(Errc::schema_error, field_context(r, "level") + " outside 1.." + std::to_string(k));
    return v;
}

}  // namespace detail

inline EvalReport evaluate_records(const std::vector<Record>& gold, const std::vector<Record>& pred, Task task,
                                   const EvalConfig& config = {}) {
    const auto pairs = align(gold, pred);
    EvalReport report;
    report.sample_count = pairs.size();
    switch (task) {
        case Task::emotions: {
            std::vector<MultiLabelSample<EmotionLabel>> samples;
            for (const auto& [g, p] : pairs) samples.push_back({detail::emotion_labels(*g), detail::emotion_labels(*p)});
            const auto f1 = f1_scores(samples);
            report.values["f1_micro"] = f1.micro;
            report.values["f1_macro"] = f1.macro;
            report.values["hamming_loss"] = hamming_loss(samples, config.emotion_scheme_size);
            if (config.hamming == HammingMode::jaccard) {
                report.values["hamming_score"] = jaccard_score(samples);
                std::vector<MultiLabelSample<EmotionLabel>> lenient;
                config.groups.check();
                for (const auto& s : samples) lenient.push_back({s.gold, lenient_prediction(s, config.groups)});
                report.values["lenient_hamming_score"] = jaccard_score(lenient);
            } else {
                report.values["hamming_score"] = hamming_score(samples, config.emotion_scheme_size);
                report.values["lenient_hamming_score"] =
                    lenient_hamming_score(samples, config.emotion_scheme_size, config.groups);
            }
            report.values["one_correct_label"] = one_correct_label_accuracy(samples);
            report.label_scheme = "emotions-" + std::to_string(config.emotion_scheme_size);
            break;
        }
        case Task::gibbs: {
            std::vector<GibbsPhase> g1, top1, top3_credit;
            std::vector<std::vector<GibbsPhase>> ranked;
            for (const auto& [g, p] : pairs) {
                const auto& gj = g->body;
                if (!gj.contains("label")) throw Error(Errc::schema_error, "gold record '" + g->id + "' needs 'label'");
                const auto gold_phase = detail::phase_value(*g, gj.at("label"), "label");
                auto r = detail::gibbs_ranking(*p);
                g1.push_back(gold_phase);
                top1.push_back(r.front());
                // top-3 credit: the gold phase when contained, else the top guess
                const bool hit = std::find(r.begin(), r.end(), gold_phase) != r.end();
                top3_credit.push_back(hit ? gold_phase : r.front());
                ranked.push_back(std::move(r));
            }
            const auto f_top1 = f1_scores(g1, top1);
            const auto f_top3 = f1_scores(g1, top3_credit);
            report.values["f1_macro_top1"] = f_top1.macro;
            report.values["f1_micro_top1"] = f_top1.micro;
            report.values["f1_macro_top3"] = f_top3.macro;
            report.values["f1_micro_top3"] = f_top3.micro;
            report.values["accuracy_top1"] = top_k_containment(g1, ranked, 1);
            report.values["accuracy_top3"] = top_k_containment(g1, ranked, 3);
            report.label_scheme = "gibbs-6";
            break;
        }
        case Task::level: {
            std::vector<int> a, b;
            for (const auto& [g, p] : pairs) {
                a.push_back(detail::level_value(*g, config.level_categories));
                b.push_back(detail::level_value(*p, config.level_categories));
            }
            report.values["qwk"] = quadratic_weighted_kappa(a, b, config.level_categories);
            report.values["cohen_kappa"] = cohen_kappa(a, b);
            report.values["accuracy"] = accuracy(a, b);
            report.label_scheme = "level-" + std::to_string(config.level_categories);
            break;
        }
    }
    return report;
}

inline EvalReport evaluate_run(const std::filesystem::path& gold_file, const std::filesystem::path& prediction_file,
                               Task task, const EvalConfig& config = {}) {
    const auto gold = parse_jsonl(read_file(gold_file, Errc::schema_error), gold_file.string());
    const auto pred = parse_jsonl(read_file(prediction_file, Errc::schema_error), prediction_file.string());
    return evaluate_records(gold, pred, task, config);
}

inline nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json j;
    j["metrics"] = r.values;
    j["sample_count"] = r.sample_count;
    j["label_scheme"] = r.label_scheme;
    return j;
}

/// Absolute difference `b - a` per metric present in both reports.
inline std::map<std::string, double> absolute_deltas(const EvalReport& a, const EvalReport& b) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : a.values) {
        if (auto it = b.values.find(k); it != b.values.end()) out[k] = it->second - v;
    }
    return out;
}

}  // namespace reflect::metrics
