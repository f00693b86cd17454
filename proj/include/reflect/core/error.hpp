#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reflect {

enum class Errc {
    empty_input,
    too_short,
    unsupported_language,
    translator_unavailable,
    empty_document,
    empty_sentence,
    missing_lexicon,
    unknown_clustering,
    prompt_gap,
    unresolved_placeholder,
    length_mismatch,
    overlapping_groups,
    single_category,
    schema_error,
    id_mismatch,
    backend_failure,
    storage_failure,
    config_error,
    payload_too_large,
};

constexpr std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::empty_input: return "empty_input";
        case Errc::too_short: return "too_short";
        case Errc::unsupported_language: return "unsupported_language";
        case Errc::translator_unavailable: return "translator_unavailable";
        case Errc::empty_document: return "empty_document";
        case Errc::empty_sentence: return "empty_sentence";
        case Errc::missing_lexicon: return "missing_lexicon";
        case Errc::unknown_clustering: return "unknown_clustering";
        case Errc::prompt_gap: return "prompt_gap";
        case Errc::unresolved_placeholder: return "unresolved_placeholder";
        case Errc::length_mismatch: return "length_mismatch";
        case Errc::overlapping_groups: return "overlapping_groups";
        case Errc::single_category: return "single_category";
        case Errc::schema_error: return "schema_error";
        case Errc::id_mismatch: return "id_mismatch";
        case Errc::backend_failure: return "backend_failure";
        case Errc::storage_failure: return "storage_failure";
        case Errc::config_error: return "config_error";
        case Errc::payload_too_large: return "payload_too_large";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace reflect
