#pragma once

#include <string>
#include <string_view>

#include "reflect/core/error.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

/// Machine translation backend. Implementations throw
/// Error(Errc::translator_unavailable) when the service cannot be reached.
class TranslatorPort {
public:
    virtual ~TranslatorPort() = default;
    virtual std::string translate(std::string_view text, const LanguageCode& from, const LanguageCode& to) const = 0;
    virtual std::string_view name() const = 0;
};

/// Offline default: prefixes the text with `⟦untranslated:<from>→<to>⟧`.
class MarkerTranslator final : public TranslatorPort {
public:
    static std::string marker(const LanguageCode& from, const LanguageCode& to) {
        return "⟦untranslated:" + from.tag() + "→" + to.tag() + "⟧";
    }

    std::string translate(std::string_view text, const LanguageCode& from, const LanguageCode& to) const override {
        return marker(from, to) + std::string(text);
    }

    std::string_view name() const override { return "marker"; }
};

/// No backend configured; every call reports the service as unavailable.
class UnavailableTranslator final : public TranslatorPort {
public:
    std::string translate(std::string_view, const LanguageCode& from, const LanguageCode& to) const override {
        throw Error(Errc::translator_unavailable, "no translation backend for " + from.tag() + "→" + to.tag());
    }

    std::string_view name() const override { return "none"; }
};

struct Translation {
    std::string text;
    bool fell_back = false;  // backend unavailable, marker stub used instead
};

/// Routes through `backend`; identity when the languages match.
inline std::string translate(std::string_view text, const LanguageCode& from, const LanguageCode& to,
                             const TranslatorPort& backend) {
    if (utf8::trim(text).empty()) throw Error(Errc::empty_input, "nothing to translate");
    if (from == to) return std::string(text);
    return backend.translate(text, from, to);
}

/// Like translate(), but falls back to the marker stub when the backend is
/// unavailable and reports that it did.
inline Translation translate_or_stub(std::string_view text, const LanguageCode& from, const LanguageCode& to,
                                     const TranslatorPort& backend) {
    try {
        return {translate(text, from, to, backend), false};
    } catch (const Error& e) {
        if (e.code() != Errc::translator_unavailable) throw;
        return {translate(text, from, to, MarkerTranslator{}), true};
    }
}

}  // namespace reflect
