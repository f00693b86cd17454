#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/service/config.hpp"
#include "reflect/textproc/segment.hpp"

namespace reflect::service {

enum class GateVerdict { accepted, revision_request };

struct GateReason {
    enum class Kind { too_short, forbidden_sequence } kind;
    std::string match;  // the forbidden entry, empty for too_short

    friend bool operator==(const GateReason&, const GateReason&) = default;
};

inline std::string_view to_string(GateReason::Kind k) noexcept {
    return k == GateReason::Kind::too_short ? "too_short" : "forbidden_sequence";
}

struct GateResult {
    GateVerdict verdict = GateVerdict::accepted;
    std::vector<GateReason> reasons;
    std::size_t sentence_count = 0;

    bool accepted() const noexcept { return verdict == GateVerdict::accepted; }
};

/// Lower-cased forbidden strings; blank lines and `#` comments skipped.
inline std::vector<std::string> load_forbidden(const std::filesystem::path& path) {
    std::vector<std::string> out;
    for (const auto& line : read_lines(path)) {
        const auto t = utf8::trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.push_back(utf8::to_lower(t));
    }
    return out;
}

/// Blocking rule: in disjunctive mode either condition blocks, in
/// conjunctive mode only both together do.
inline GateResult validate_submission(std::string_view text, const SentenceSegmenter& segmenter,
                                      const std::vector<std::string>& forbidden, GateMode mode,
                                      std::size_t min_sentences = 3) {
    GateResult r;
    if (!utf8::trim(text).empty()) r.sentence_count = segmenter.segment(text).size();
    const bool too_short = r.sentence_count < min_sentences;

    std::vector<GateReason> hits;
    const auto lowered = utf8::to_lower(text);
    for (const auto& f : forbidden) {
        if (!f.empty() && lowered.find(f) != std::string::npos) {
            hits.push_back({GateReason::Kind::forbidden_sequence, f});
        }
    }
    const bool has_forbidden = !hits.empty();

    const bool blocked = mode == GateMode::disjunctive ? (too_short || has_forbidden) : (too_short && has_forbidden);
    if (!blocked) return r;
    r.verdict = GateVerdict::revision_request;
    if (too_short) r.reasons.push_back({GateReason::Kind::too_short, {}});
    for (auto& h : hits) r.reasons.push_back(std::move(h));
    return r;
}

}  // namespace reflect::service
