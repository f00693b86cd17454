#pragma once

// The analysis pipeline behind every transport: gate, language ID,
// optional translation, segmentation and tagging, classifier fan-out,
// profile, prompt selection, composition, persistence.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "reflect/classifiers/baseline.hpp"
#include "reflect/classifiers/ports.hpp"
#include "reflect/core/error.hpp"
#include "reflect/core/unicode.hpp"
#include "reflect/lingscore/lingscore.hpp"
#include "reflect/reasoner/feedback.hpp"
#include "reflect/reasoner/profile.hpp"
#include "reflect/reasoner/prompt_db.hpp"
#include "reflect/service/config.hpp"
#include "reflect/service/gate.hpp"
#include "reflect/service/store.hpp"
#include "reflect/service/types.hpp"
#include "reflect/textproc/processor.hpp"
#include "reflect/textproc/translate.hpp"

namespace reflect::service {

struct Backends {
    std::shared_ptr<const EmotionPort> emotion;
    std::shared_ptr<const GibbsPort> gibbs;
    std::shared_ptr<const SentimentPort> sentiment;
    std::shared_ptr<const TopicPort> topic;
    std::shared_ptr<const LevelPort> level;
    std::map<Clustering, std::vector<std::string>> topic_names;

    /// Backends named in `selection` (task -> backend). Only "lexicon" ships.
    static Backends load(const std::filesystem::path& data_dir, const std::map<std::string, std::string>& selection) {
        for (const auto& [task, name] : selection) {
            if (name != "lexicon") {
                throw Error(Errc::config_error, "unknown backend '" + name + "' for task '" + task + "'");
            }
        }
        auto base = BaselineBackends::load(data_dir);
        Backends b;
        b.emotion = make_concurrent(base.emotion);
        b.gibbs = make_concurrent(base.gibbs);
        b.sentiment = make_concurrent(base.sentiment);
        b.topic = make_concurrent(base.topic);
        b.level = make_concurrent(base.level);
        const auto topics = KeywordTopicAssigner::load(data_dir / "topics");
        for (auto c : {Clustering::pedagogy_specific, Clustering::general_educational}) {
            b.topic_names[c] = topics.catalog(c).names;
        }
        return b;
    }
};

struct Counters {
    std::atomic<std::uint64_t> requests{0};
    std::atomic<std::uint64_t> gate_rejections{0};
    std::atomic<std::uint64_t> analysis_runs{0};
    std::atomic<std::uint64_t> backend_failures{0};
    std::atomic<std::uint64_t> storage_failures{0};
};

namespace detail {

template <class Port>
auto call_port(std::string_view task, const Port& port, const typename Port::input_type& input) {
    try {
        return port.predict(input);
    } catch (const std::exception& e) {
        throw Error(Errc::backend_failure, std::string(task) + " backend '" + port.name() + "' failed: " + e.what());
    }
}

inline std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace detail

/// Shared state is loaded once in the constructor and never mutated; only
/// the counters and the store change while serving.
class Engine {
public:
    Engine(ServiceConfig config, TextProcessor processor, PromptDb prompts, Backends backends,
           std::vector<std::string> forbidden, std::shared_ptr<const TranslatorPort> translator,
           std::shared_ptr<HistoryStore> store)
        : config_(std::move(config)),
          processor_(std::move(processor)),
          scorer_(LinguisticScorer::load(config_.data_dir / "lexicons", processor_.tagger())),
          prompts_(std::move(prompts)),
          backends_(std::move(backends)),
          forbidden_(std::move(forbidden)),
          translator_(translator ? std::move(translator) : std::make_shared<UnavailableTranslator>()),
          store_(std::move(store)) {
        prompts_.validate();
    }

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Everything from the config's data directory, with the JSONL store
    /// when a store path is configured.
    static std::unique_ptr<Engine> load(const ServiceConfig& config,
                                        std::shared_ptr<const TranslatorPort> translator = nullptr) {
        std::shared_ptr<HistoryStore> store;
        if (config.store_path) store = std::make_shared<JsonlStore>(*config.store_path);
        return std::make_unique<Engine>(config, TextProcessor::load(config.data_dir), PromptDb::load(config.prompts()),
                                        Backends::load(config.data_dir, config.backends),
                                        load_forbidden(config.forbidden()), std::move(translator), std::move(store));
    }

    GateResult gate(std::string_view text) const {
        return validate_submission(text, processor_.segmenter(), forbidden_, config_.gate_mode, config_.min_sentences);
    }

    AnalyzeOutcome handle_analyze(const AnalyzeRequest& request) const {
        ++counters_.requests;
        const auto size = utf8::length(request.text);
        if (size > config_.max_text_size) {
            throw Error(Errc::payload_too_large, "text has " + std::to_string(size) + " characters, limit is " +
                                                     std::to_string(config_.max_text_size));
        }
        auto verdict = gate(request.text);
        if (!verdict.accepted()) {
            ++counters_.gate_rejections;
            return verdict;
        }
        ++counters_.analysis_runs;
        const auto submitted = detail::now_ms();
        try {
            auto response = run_pipeline(request);
            persist(request, response, submitted);
            return response;
        } catch (const Error& e) {
            if (e.code() == Errc::backend_failure) ++counters_.backend_failures;
            throw;
        }
    }

    /// Segmentation, tagging and classifier fan-out without the gate.
    AnalyzedDocument analyze_document(std::string_view text, Clustering clustering) const {
        AnalyzedDocument doc;
        doc.clustering = clustering;
        try {
            const auto d = processor_.detect_language(text);
            doc.source_language = d.language;
            doc.language_confidence = d.confidence;
        } catch (const Error& e) {
            if (e.code() != Errc::too_short) throw;
            doc.source_language = config_.default_language;
        }
        doc.language = doc.source_language;
        doc.text = std::string(text);
        if (!doc.source_language.native()) {
            doc.language = LanguageCode::de();
            try {
                doc.text = translate(text, doc.source_language, doc.language, *translator_);
                doc.translated = true;
            } catch (const Error& e) {
                // without a backend the original text goes through the German lexicons
                if (e.code() != Errc::translator_unavailable) throw;
            }
        }
        auto sentences = processor_.analyze(doc.text, doc.language);
        for (auto& s : sentences) {
            if (s.tokens.empty()) continue;
            SentenceAnalysis a;
            a.sentence = std::move(s);
            const SentenceQuery q{a.sentence, doc.language, clustering};
            a.emotions = detail::call_port("emotion", *backends_.emotion, q);
            a.gibbs = detail::call_port("gibbs", *backends_.gibbs, q);
            a.sentiment = detail::call_port("sentiment", *backends_.sentiment, q);
            a.topic = detail::call_port("topic", *backends_.topic, q);
            doc.sentences.push_back(std::move(a));
        }
        if (doc.sentences.empty()) throw Error(Errc::empty_document, "no analyzable sentences");
        doc.level = detail::call_port("level", *backends_.level, doc);
        return doc;
    }

    TextProfile profile(const AnalyzedDocument& doc) const {
        std::vector<Sentence> sentences;
        sentences.reserve(doc.sentences.size());
        for (const auto& s : doc.sentences) sentences.push_back(s.sentence);
        const auto linguistic = scorer_.score(sentences, doc.language);
        const auto it = backends_.topic_names.find(doc.clustering);
        const std::span<const std::string> names =
            it == backends_.topic_names.end() ? std::span<const std::string>{} : std::span<const std::string>(it->second);
        return build_profile(doc, linguistic, names);
    }

    std::vector<StoredReflection> history(const std::string& author_id, Page page) const {
        if (!store_) return {};
        return store_->history(author_id, page);
    }

    const ServiceConfig& config() const noexcept { return config_; }
    const TextProcessor& processor() const noexcept { return processor_; }
    const LinguisticScorer& scorer() const noexcept { return scorer_; }
    const PromptDb& prompts() const noexcept { return prompts_; }
    const Counters& counters() const noexcept { return counters_; }
    const HistoryStore* store() const noexcept { return store_.get(); }

private:
    std::uint64_t seed_for(const AnalyzeRequest& r) const {
        if (r.seed) return *r.seed;
        if (config_.seed_policy == SeedPolicy::random) {
            std::random_device rd;
            return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        return config_.default_seed;
    }

    FeedbackResponse run_pipeline(const AnalyzeRequest& request) const {
        const auto clustering = request.clustering.value_or(config_.clustering);
        const auto doc = analyze_document(request.text, clustering);
        const auto prof = profile(doc);
        const auto plan = select_prompts(prof, prompts_, seed_for(request), config_.selection);
        const auto target = request.feedback_language.value_or(doc.source_language);
        auto response = compose_feedback(plan, prof, prompts_, target, *translator_);
        if (!doc.translated) response.annotations = annotate(doc, clustering);
        return response;
    }

    std::vector<SentenceAnnotation> annotate(const AnalyzedDocument& doc, Clustering clustering) const {
        std::vector<SentenceAnnotation> out;
        const auto names = backends_.topic_names.find(clustering);
        for (const auto& s : doc.sentences) {
            SentenceAnnotation a;
            a.sentence = s.sentence.index;
            a.start = utf8::code_point_offset(doc.text, s.sentence.span.begin);
            a.end = utf8::code_point_offset(doc.text, s.sentence.span.end);
            for (auto l : s.emotions.labels) {
                if (l != EmotionLabel::no_emotion) a.labels.push_back({"emotion", std::string(to_string(l))});
            }
            a.labels.push_back({"gibbs", std::string(to_string(s.gibbs.argmax()))});
            if (s.sentiment != SentimentPolarity::neutral) {
                a.labels.push_back({"sentiment", std::string(to_string(s.sentiment))});
            }
            if (s.topic.topic_id) {
                const auto id = *s.topic.topic_id;
                const bool named = names != backends_.topic_names.end() && id < names->second.size();
                a.labels.push_back({"topic", named ? names->second[id] : "topic-" + std::to_string(id)});
            }
            const auto c = scorer_.classify(s.sentence, doc.language);
            a.labels.push_back({"linguistic", c.complexity == Complexity::complex ? "complex" : "simple"});
            out.push_back(std::move(a));
        }
        return out;
    }

    void persist(const AnalyzeRequest& request, FeedbackResponse& response, std::int64_t submitted) const {
        if (!store_) {
            response.persisted = false;
            return;
        }
        StoredReflection record;
        record.author_id = request.author_id;
        record.text = request.text;
        record.response = response;
        record.response.persisted = true;
        record.submitted_at_ms = submitted;
        record.completed_at_ms = detail::now_ms();
        record.pipeline_version = std::string(kPipelineVersion);
        try {
            store_->append(std::move(record));
            response.persisted = true;
        } catch (const Error& e) {
            if (e.code() != Errc::storage_failure) throw;
            ++counters_.storage_failures;
            response.persisted = false;
        }
    }

    ServiceConfig config_;
    TextProcessor processor_;
    LinguisticScorer scorer_;
    PromptDb prompts_;
    Backends backends_;
    std::vector<std::string> forbidden_;
    std::shared_ptr<const TranslatorPort> translator_;
    std::shared_ptr<HistoryStore> store_;
    mutable Counters counters_;
};

}  // namespace reflect::service
