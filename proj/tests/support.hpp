#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reflect/core/lexicon.hpp"
#include "reflect/service/config.hpp"
#include "reflect/textproc/processor.hpp"

namespace reflect::testing {

inline std::filesystem::path data_dir() { return REFLECT_DEFAULT_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return REFLECT_FIXTURE_DIR; }
inline std::string fixture(const std::string& name) { return read_file(fixture_dir() / name); }

/// Loaded once per test binary.
inline const TextProcessor& processor() {
    static const TextProcessor p = TextProcessor::load(data_dir());
    return p;
}

inline std::vector<Sentence> analyze(const std::string& text, const char* lang = "de") {
    return processor().analyze(text, LanguageCode::from_tag(lang));
}

inline std::vector<std::string> lemmas(const Sentence& s) {
    std::vector<std::string> out;
    for (const auto& t : s.tokens) out.push_back(t.lemma);
    return out;
}

}  // namespace reflect::testing
