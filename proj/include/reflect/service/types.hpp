#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "reflect/classifiers/labels.hpp"
#include "reflect/reasoner/feedback.hpp"
#include "reflect/service/gate.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect::service {

struct AnalyzeRequest {
    std::string text;
    std::string author_id = "anonymous";
    std::optional<std::uint64_t> seed;
    std::optional<Clustering> clustering;
    std::optional<LanguageCode> feedback_language;
};

using AnalyzeOutcome = std::variant<FeedbackResponse, GateResult>;

struct StoredReflection {
    std::uint64_t id = 0;
    std::string author_id;
    std::string text;
    FeedbackResponse response;
    std::int64_t submitted_at_ms = 0;
    std::int64_t completed_at_ms = 0;
    std::string pipeline_version;
};

}  // namespace reflect::service
