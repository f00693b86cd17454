#pragma once

// JSON forms of service messages and stored records.
//
//   client -> server  {"type":"analyze","text":..,"seed":..,"lang":..,"clustering":..,"author":..}
//   server -> client  {"type":"feedback","text":..,"vector":[12],"annotations":[..],"language":..,...}
//                     {"type":"revision_request","reasons":[{"code":"too_short"}, ...]}
//                     {"type":"error","code":..,"message":..}

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "reflect/core/error.hpp"
#include "reflect/reasoner/feedback.hpp"
#include "reflect/service/gate.hpp"
#include "reflect/service/types.hpp"

namespace reflect::service {

using nlohmann::json;

inline json annotations_to_json(const std::vector<SentenceAnnotation>& annotations) {
    json out = json::array();
    for (const auto& a : annotations) {
        json labels = json::array();
        for (const auto& l : a.labels) labels.push_back({{"source", l.source}, {"label", l.label}});
        out.push_back({{"sentence", a.sentence}, {"start", a.start}, {"end", a.end}, {"labels", std::move(labels)}});
    }
    return out;
}

inline std::vector<SentenceAnnotation> annotations_from_json(const json& j) {
    std::vector<SentenceAnnotation> out;
    for (const auto& a : j) {
        SentenceAnnotation s;
        s.sentence = a.at("sentence").get<std::size_t>();
        s.start = a.at("start").get<std::size_t>();
        s.end = a.at("end").get<std::size_t>();
        for (const auto& l : a.at("labels")) {
            s.labels.push_back({l.at("source").get<std::string>(), l.at("label").get<std::string>()});
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Complete response, used for storage.
inline json to_json(const FeedbackResponse& r) {
    json plan = json::array();
    for (const auto& item : r.plan.selected) {
        plan.push_back({{"record_id", item.record_id}, {"trigger", item.trigger}, {"variant_index", item.variant_index}});
    }
    return {
        {"text", r.text},
        {"vector", r.feature_vector},
        {"feature_vector_version", r.feature_vector_version},
        {"annotations", annotations_to_json(r.annotations)},
        {"language", r.language.tag()},
        {"level", to_int(r.level)},
        {"seed", r.plan.seed},
        {"plan", std::move(plan)},
        {"translated", r.translated},
        {"translator_fallback", r.translator_fallback},
        {"persisted", r.persisted},
    };
}

inline FeedbackResponse feedback_from_json(const json& j) {
    try {
        FeedbackResponse r;
        r.text = j.at("text").get<std::string>();
        const auto v = j.at("vector").get<std::vector<double>>();
        if (v.size() != kFeatureVectorSize) throw Error(Errc::schema_error, "feature vector must have 12 entries");
        std::copy(v.begin(), v.end(), r.feature_vector.begin());
        r.feature_vector_version = j.at("feature_vector_version").get<int>();
        r.annotations = annotations_from_json(j.at("annotations"));
        r.language = LanguageCode::from_tag(j.at("language").get<std::string>());
        r.level = level_from_int(j.at("level").get<int>());
        r.plan.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& item : j.at("plan")) {
            r.plan.selected.push_back({item.at("record_id").get<std::string>(), item.at("trigger").get<std::string>(),
                                       item.at("variant_index").get<std::size_t>()});
        }
        r.translated = j.at("translated").get<bool>();
        r.translator_fallback = j.at("translator_fallback").get<bool>();
        r.persisted = j.at("persisted").get<bool>();
        return r;
    } catch (const json::exception& e) {
        throw Error(Errc::schema_error, std::string("feedback record: ") + e.what());
    }
}

inline json feedback_message(const FeedbackResponse& r) {
    auto j = to_json(r);
    j["type"] = "feedback";
    j.erase("plan");
    return j;
}

inline json revision_message(const GateResult& g) {
    json reasons = json::array();
    for (const auto& reason : g.reasons) {
        json item{{"code", to_string(reason.kind)}};
        if (!reason.match.empty()) item["match"] = reason.match;
        reasons.push_back(std::move(item));
    }
    return {{"type", "revision_request"}, {"reasons", std::move(reasons)}, {"sentence_count", g.sentence_count}};
}

inline json error_message(std::string_view code, std::string_view message) {
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

inline json error_message(const Error& e) { return error_message(to_string(e.code()), e.what()); }

inline json outcome_message(const AnalyzeOutcome& outcome) {
    if (const auto* f = std::get_if<FeedbackResponse>(&outcome)) return feedback_message(*f);
    return revision_message(std::get<GateResult>(outcome));
}

/// Parses an analyze message. `require_type` is set for WebSocket frames,
/// where the type field routes the message.
inline AnalyzeRequest parse_analyze_request(std::string_view body, bool require_type) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error&) {
        throw Error(Errc::schema_error, "request is not valid JSON");
    }
    if (!j.is_object()) throw Error(Errc::schema_error, "request must be a JSON object");
    if (j.contains("type") || require_type) {
        if (!j.contains("type") || !j.at("type").is_string() || j.at("type").get<std::string>() != "analyze") {
            throw Error(Errc::schema_error, "unsupported message type; expected \"analyze\"");
        }
    }
    AnalyzeRequest r;
    if (!j.contains("text") || !j.at("text").is_string()) throw Error(Errc::schema_error, "'text' must be a string");
    r.text = j.at("text").get<std::string>();
    if (j.contains("seed") && !j.at("seed").is_null()) {
        if (!j.at("seed").is_number_unsigned()) throw Error(Errc::schema_error, "'seed' must be a non-negative integer");
        r.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("lang") && !j.at("lang").is_null()) {
        if (!j.at("lang").is_string()) throw Error(Errc::schema_error, "'lang' must be a string");
        try {
            r.feedback_language = LanguageCode::from_tag(j.at("lang").get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::schema_error, e.what());
        }
    }
    if (j.contains("clustering") && !j.at("clustering").is_null()) {
        if (!j.at("clustering").is_string()) throw Error(Errc::schema_error, "'clustering' must be a string");
        r.clustering = parse_clustering(j.at("clustering").get<std::string>());
    }
    if (j.contains("author") && !j.at("author").is_null()) {
        if (!j.at("author").is_string() || j.at("author").get<std::string>().empty()) {
            throw Error(Errc::schema_error, "'author' must be a non-empty string");
        }
        r.author_id = j.at("author").get<std::string>();
    }
    return r;
}

inline json to_json(const StoredReflection& s) {
    return {
        {"id", s.id},
        {"author", s.author_id},
        {"text", s.text},
        {"response", to_json(s.response)},
        {"submitted_at_ms", s.submitted_at_ms},
        {"completed_at_ms", s.completed_at_ms},
        {"pipeline_version", s.pipeline_version},
    };
}

inline StoredReflection stored_from_json(const json& j) {
    try {
        StoredReflection s;
        s.id = j.at("id").get<std::uint64_t>();
        s.author_id = j.at("author").get<std::string>();
        s.text = j.at("text").get<std::string>();
        s.response = feedback_from_json(j.at("response"));
        s.submitted_at_ms = j.at("submitted_at_ms").get<std::int64_t>();
        s.completed_at_ms = j.at("completed_at_ms").get<std::int64_t>();
        s.pipeline_version = j.at("pipeline_version").get<std::string>();
        return s;
    } catch (const json::exception& e) {
        throw Error(Errc::schema_error, std::string("stored reflection: ") + e.what());
    }
}

/// History entry; the submitted text only when asked for.
inline json summary_json(const StoredReflection& s, bool include_text) {
    json j{
        {"id", s.id},
        {"author", s.author_id},
        {"submitted_at_ms", s.submitted_at_ms},
        {"language", s.response.language.tag()},
        {"level", to_int(s.response.level)},
        {"vector", s.response.feature_vector},
        {"feedback", s.response.text},
        {"pipeline_version", s.pipeline_version},
    };
    if (include_text) j["text"] = s.text;
    return j;
}

}  // namespace reflect::service
