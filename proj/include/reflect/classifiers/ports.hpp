#pragma once

// Classifier ports. A backend is anything implementing `predict(input)` for
// one task; the pipeline never depends on a concrete model.

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "reflect/classifiers/labels.hpp"
#include "reflect/textproc/types.hpp"

namespace reflect {

struct SentenceAnalysis {
    Sentence sentence;
    EmotionPrediction emotions;
    GibbsDistribution gibbs;
    SentimentPolarity sentiment = SentimentPolarity::neutral;
    TopicAssignment topic;
};

/// A submission after segmentation, tagging and per-sentence
/// classification. `text` is the analyzed text (the German translation
/// when the source language has no native lexicons).
struct AnalyzedDocument {
    std::string text;
    LanguageCode language;          // language of `text`
    LanguageCode source_language;   // detected language of the submission
    double language_confidence = 0.0;
    bool translated = false;
    Clustering clustering = Clustering::pedagogy_specific;
    std::vector<SentenceAnalysis> sentences;
    ReflectiveLevel level = ReflectiveLevel::description;
};

struct SentenceQuery {
    const Sentence& sentence;
    const LanguageCode& language;
    Clustering clustering = Clustering::pedagogy_specific;
};

template <class Input, class Output>
class ClassifierPort {
public:
    using input_type = Input;
    using output_type = Output;

    virtual ~ClassifierPort() = default;
    virtual Output predict(const Input& input) const = 0;
    virtual std::string name() const = 0;
    /// Identifier of the label scheme the backend emits.
    virtual std::string label_scheme() const = 0;
    /// Backends holding per-call mutable state return false and get wrapped
    /// in a Serialized adapter.
    virtual bool thread_safe() const { return true; }
};

using EmotionPort = ClassifierPort<SentenceQuery, EmotionPrediction>;
using GibbsPort = ClassifierPort<SentenceQuery, GibbsDistribution>;
using SentimentPort = ClassifierPort<SentenceQuery, SentimentPolarity>;
using TopicPort = ClassifierPort<SentenceQuery, TopicAssignment>;
using LevelPort = ClassifierPort<AnalyzedDocument, ReflectiveLevel>;

/// Serializes every call into a backend that is not safe for concurrent use.
template <class Input, class Output>
class Serialized final : public ClassifierPort<Input, Output> {
public:
    explicit Serialized(std::shared_ptr<const ClassifierPort<Input, Output>> inner) : inner_(std::move(inner)) {}

    Output predict(const Input& input) const override {
        std::lock_guard lock(mutex_);
        return inner_->predict(input);
    }
    std::string name() const override { return inner_->name(); }
    std::string label_scheme() const override { return inner_->label_scheme(); }
    bool thread_safe() const override { return true; }

private:
    std::shared_ptr<const ClassifierPort<Input, Output>> inner_;
    mutable std::mutex mutex_;
};

/// Wraps `backend` in a Serialized adapter unless it is thread-safe.
template <class Input, class Output>
std::shared_ptr<const ClassifierPort<Input, Output>> make_concurrent(
    std::shared_ptr<const ClassifierPort<Input, Output>> backend) {
    if (backend->thread_safe()) return backend;
    return std::make_shared<Serialized<Input, Output>>(std::move(backend));
}

}  // namespace reflect
