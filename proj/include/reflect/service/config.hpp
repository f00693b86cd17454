#pragma once

// Service configuration. Precedence, lowest to highest: built-in defaults,
// JSON config file, REFLECT_* environment variables, command-line flags.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "reflect/classifiers/labels.hpp"
#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/reasoner/feedback.hpp"
#include "reflect/textproc/types.hpp"

#ifndef REFLECT_DEFAULT_DATA_DIR
#define REFLECT_DEFAULT_DATA_DIR "data"
#endif

namespace reflect::service {

inline constexpr std::string_view kPipelineVersion = "reflect-baseline/1";

enum class GateMode { disjunctive, conjunctive };

inline std::string_view to_string(GateMode m) noexcept {
    return m == GateMode::conjunctive ? "conjunctive" : "disjunctive";
}

inline GateMode parse_gate_mode(std::string_view s) {
    if (s == "disjunctive") return GateMode::disjunctive;
    if (s == "conjunctive") return GateMode::conjunctive;
    throw Error(Errc::config_error, "gate_mode must be 'disjunctive' or 'conjunctive', got '" + std::string(s) + "'");
}

/// `fixed` uses default_seed when a request carries none; `random` draws
/// one per request (responses are then only reproducible via the echoed seed).
enum class SeedPolicy { fixed, random };

inline SeedPolicy parse_seed_policy(std::string_view s) {
    if (s == "fixed") return SeedPolicy::fixed;
    if (s == "random") return SeedPolicy::random;
    throw Error(Errc::config_error, "seed_policy must be 'fixed' or 'random', got '" + std::string(s) + "'");
}

inline std::string_view to_string(SeedPolicy p) noexcept { return p == SeedPolicy::random ? "random" : "fixed"; }

struct ServiceConfig {
    std::string listen_address = "127.0.0.1";
    std::uint16_t port = 8080;
    std::size_t max_text_size = 50000;  // code points
    std::filesystem::path data_dir = REFLECT_DEFAULT_DATA_DIR;
    std::optional<std::filesystem::path> forbidden_path;  // default <data>/lexicons/forbidden.txt
    std::optional<std::filesystem::path> prompts_path;    // default <data>/prompts.json
    std::optional<std::filesystem::path> store_path;      // unset: no persistence
    GateMode gate_mode = GateMode::disjunctive;
    std::size_t min_sentences = 3;
    SeedPolicy seed_policy = SeedPolicy::fixed;
    std::uint64_t default_seed = 0;
    LanguageCode default_language = LanguageCode::de();
    Clustering clustering = Clustering::pedagogy_specific;
    std::map<std::string, std::string> backends{
        {"emotion", "lexicon"}, {"gibbs", "lexicon"}, {"sentiment", "lexicon"}, {"topic", "lexicon"}, {"level", "lexicon"},
    };
    SelectionConfig selection;
    std::size_t workers = 0;  // 0: hardware concurrency

    std::filesystem::path forbidden() const { return forbidden_path.value_or(data_dir / "lexicons" / "forbidden.txt"); }
    std::filesystem::path prompts() const { return prompts_path.value_or(data_dir / "prompts.json"); }
};

namespace detail {

inline std::uint64_t to_u64(const std::string& v, std::string_view key) {
    try {
        std::size_t used = 0;
        const auto n = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, std::string(key) + ": not a non-negative integer: '" + v + "'");
    }
}

inline double to_double(const std::string& v, std::string_view key) {
    try {
        std::size_t used = 0;
        const auto d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, std::string(key) + ": not a number: '" + v + "'");
    }
}

}  // namespace detail

/// Sets one key from its string form. Keys are the JSON config keys; the
/// same names (upper-cased, REFLECT_ prefix) are read from the environment.
inline void apply_setting(ServiceConfig& c, std::string_view key, const std::string& value) {
    if (key == "listen_address") {
        c.listen_address = value;
    } else if (key == "port") {
        const auto p = detail::to_u64(value, key);
        if (p > 65535) throw Error(Errc::config_error, "port out of range: " + value);
        c.port = static_cast<std::uint16_t>(p);
    } else if (key == "max_text_size") {
        c.max_text_size = detail::to_u64(value, key);
    } else if (key == "data_dir") {
        c.data_dir = value;
    } else if (key == "forbidden_path") {
        c.forbidden_path = value;
    } else if (key == "prompts_path") {
        c.prompts_path = value;
    } else if (key == "store_path") {
        if (value.empty()) {
            c.store_path.reset();
        } else {
            c.store_path = value;
        }
    } else if (key == "gate_mode") {
        c.gate_mode = parse_gate_mode(value);
    } else if (key == "min_sentences") {
        c.min_sentences = detail::to_u64(value, key);
    } else if (key == "seed_policy") {
        c.seed_policy = parse_seed_policy(value);
    } else if (key == "default_seed") {
        c.default_seed = detail::to_u64(value, key);
    } else if (key == "default_language") {
        try {
            c.default_language = LanguageCode::from_tag(value);
        } catch (const Error& e) {
            throw Error(Errc::config_error, std::string("default_language: ") + e.what());
        }
    } else if (key == "clustering") {
        try {
            c.clustering = parse_clustering(value);
        } catch (const Error& e) {
            throw Error(Errc::config_error, std::string("clustering: ") + e.what());
        }
    } else if (key == "presence_mode") {
        if (value == "top1") {
            c.selection.presence = PresenceMode::top1;
        } else if (value == "top3") {
            c.selection.presence = PresenceMode::top3;
        } else {
            throw Error(Errc::config_error, "presence_mode must be 'top1' or 'top3'");
        }
    } else if (key == "min_mean_sentence_length") {
        c.selection.min_mean_sentence_length = detail::to_double(value, key);
    } else if (key == "min_connector_density") {
        c.selection.min_connector_density = detail::to_double(value, key);
    } else if (key == "min_expressivity_ratio") {
        c.selection.min_expressivity_ratio = detail::to_double(value, key);
    } else if (key == "min_lexical_variability") {
        c.selection.min_lexical_variability = detail::to_double(value, key);
    } else if (key == "workers") {
        c.workers = detail::to_u64(value, key);
    } else if (key.starts_with("backend_")) {
        const auto task = std::string(key.substr(8));
        if (!c.backends.contains(task)) throw Error(Errc::config_error, "unknown backend task '" + task + "'");
        c.backends[task] = value;
    } else {
        throw Error(Errc::config_error, "unknown config key '" + std::string(key) + "'");
    }
}

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "listen_address",   "port",           "max_text_size",         "data_dir",
        "forbidden_path",   "prompts_path",   "store_path",            "gate_mode",
        "min_sentences",    "seed_policy",    "default_seed",          "default_language",
        "clustering",       "presence_mode",  "min_mean_sentence_length", "min_connector_density",
        "min_expressivity_ratio", "min_lexical_variability", "workers", "backend_emotion",
        "backend_gibbs",    "backend_sentiment", "backend_topic",      "backend_level",
    };
    return keys;
}

/// Applies a JSON object of settings. A nested "backends" object maps task
/// to backend name. Relative paths resolve against `base_dir`.
inline void apply_json(ServiceConfig& c, const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    if (!j.is_object()) throw Error(Errc::config_error, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "backends") {
            if (!value.is_object()) throw Error(Errc::config_error, "'backends' must be an object");
            for (const auto& [task, name] : value.items()) {
                apply_setting(c, "backend_" + task, name.is_string() ? name.get<std::string>() : name.dump());
            }
            continue;
        }
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        const bool is_path = key == "data_dir" || key == "forbidden_path" || key == "prompts_path" || key == "store_path";
        if (is_path && !text.empty() && std::filesystem::path(text).is_relative() && !base_dir.empty()) {
            text = (base_dir / text).lexically_normal().string();
        }
        apply_setting(c, key, text);
    }
}

inline void apply_file(ServiceConfig& c, const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path, Errc::config_error));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::config_error, path.string() + ": " + e.what());
    }
    apply_json(c, j, path.parent_path());
}

inline std::string env_name(std::string_view key) {
    std::string out = "REFLECT_";
    for (char ch : key) out.push_back(ch >= 'a' && ch <= 'z' ? static_cast<char>(ch - 'a' + 'A') : ch);
    return out;
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
}

inline void apply_env(ServiceConfig& c, const EnvLookup& env = process_env) {
    for (const auto& key : config_keys()) {
        if (auto v = env(env_name(key))) apply_setting(c, key, *v);
    }
}

/// Config file discovery: explicit path, then REFLECT_CONFIG, else none.
inline std::optional<std::filesystem::path> discover_config(const std::optional<std::filesystem::path>& flag,
                                                            const EnvLookup& env = process_env) {
    if (flag) return flag;
    if (auto v = env("REFLECT_CONFIG"); v && !v->empty()) return std::filesystem::path(*v);
    return std::nullopt;
}

/// Defaults, then file, then environment, then `overrides` (flag values).
inline ServiceConfig resolve_config(const std::optional<std::filesystem::path>& config_flag,
                                    const std::map<std::string, std::string>& overrides,
                                    const EnvLookup& env = process_env) {
    ServiceConfig c;
    if (auto path = discover_config(config_flag, env)) apply_file(c, *path);
    apply_env(c, env);
    for (const auto& [k, v] : overrides) apply_setting(c, k, v);
    return c;
}

}  // namespace reflect::service
