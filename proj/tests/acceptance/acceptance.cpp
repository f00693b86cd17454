// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when
// any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gate_table.hpp"
#include "oracles.hpp"
#include "reflect/metrics/metrics.hpp"
#include "reflect/reasoner/feedback.hpp"
#include "reflect/reasoner/prompt_db.hpp"
#include "reflect/service/engine.hpp"
#include "reflect/service/gate.hpp"
#include "reflect/service/wire.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace reflect;
using namespace reflect::testing;
namespace m = reflect::metrics;
namespace o = reflect::oracle;
using G = GibbsPhase;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTol = 1e-9;

/// Collects the first failure message of one criterion.
struct Check {
    std::string detail;
    bool ok() const { return detail.empty(); }
    void fail(const std::string& why) {
        if (detail.empty()) detail = why;
    }
    void expect(bool condition, const std::string& why) {
        if (!condition) fail(why);
    }
    void near(double got, double want, const std::string& what) {
        if (!(std::fabs(got - want) <= kTol)) {
            std::ostringstream os;
            os.precision(17);
            os << what << ": got " << got << ", oracle " << want;
            fail(os.str());
        }
    }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const PromptDb& db() {
    static const PromptDb d = PromptDb::load(data_dir() / "prompts.json");
    return d;
}

const service::Engine& engine() {
    static const auto e = service::Engine::load(service::ServiceConfig{});
    return *e;
}

std::vector<m::MultiLabelSample<int>> convert(const std::vector<o::Sample>& samples) {
    std::vector<m::MultiLabelSample<int>> out;
    for (const auto& s : samples) out.push_back({s.gold, s.predicted});
    return out;
}

std::vector<std::string> triggers_of(const FeedbackPlan& plan) {
    std::vector<std::string> out;
    for (const auto& i : plan.selected) out.push_back(i.trigger);
    return out;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

// ---------------------------------------------------------------- 1

Check metric_oracles() {
    Check c;
    std::mt19937_64 rng(20240601);
    const std::vector<std::set<int>> groups{{0, 1}, {2, 3}};
    const m::SimilarityGroups<int> lib_groups{groups};
    const auto start = Clock::now();
    int qwk_checked = 0;
    for (int run = 0; run < 200 && c.ok(); ++run) {
        const std::string tag = "instance " + std::to_string(run) + " ";
        const int scheme = 4 + run % 7;
        const auto samples = o::random_samples(rng, scheme, 1 + run % 10);
        const auto lib = convert(samples);
        const auto f = m::f1_scores(lib);
        const auto [macro, micro] = o::f1_multilabel(samples, scheme);
        c.near(f.macro, macro, tag + "f1 macro");
        c.near(f.micro, micro, tag + "f1 micro");
        c.near(m::hamming_loss(lib, scheme), o::hamming_loss(samples, scheme), tag + "hamming");
        c.near(m::lenient_hamming_score(lib, scheme, lib_groups), 1.0 - o::lenient_hamming_loss(samples, scheme, groups),
               tag + "lenient hamming");
        c.near(m::one_correct_label_accuracy(lib), o::one_correct_label(samples), tag + "one-correct-label");

        const int k = 2 + run % 4;
        const auto a = o::random_ordinals(rng, k, 2 + run % 10);
        const auto b = o::random_ordinals(rng, k, static_cast<int>(a.size()));
        c.near(m::cohen_kappa(a, b), o::cohen_kappa(a, b), tag + "kappa");
        const auto [smacro, smicro] = o::f1_single(a, b, k + 1);
        const auto sf = m::f1_scores(a, b);
        c.near(sf.macro, smacro, tag + "single-label f1 macro");
        c.near(sf.micro, smicro, tag + "single-label f1 micro");
        std::set<int> values(a.begin(), a.end());
        values.insert(b.begin(), b.end());
        try {
            c.near(m::quadratic_weighted_kappa(a, b, k), o::qwk(a, b, k), tag + "qwk");
            ++qwk_checked;
        } catch (const Error& e) {
            c.expect(e.code() == Errc::single_category && values.size() == 1, tag + "qwk threw " + e.what());
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(qwk_checked >= 180, "too few non-degenerate qwk instances: " + std::to_string(qwk_checked));
    c.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
    return c;
}

// ---------------------------------------------------------------- 2

Check lenient_dominates_strict() {
    Check c;
    std::mt19937_64 rng(77);
    const m::SimilarityGroups<int> groups{{{0, 1}, {2, 3, 4}, {7, 8}}};
    for (int run = 0; run < 1000 && c.ok(); ++run) {
        const auto samples = convert(o::random_samples(rng, 18, 1 + run % 8));
        const double strict = m::hamming_score(samples, 18);
        const double lenient = m::lenient_hamming_score(samples, 18, groups);
        c.expect(lenient + kTol >= strict, "instance " + std::to_string(run) + ": lenient below strict");
    }
    using E = EmotionLabel;
    const m::SimilarityGroups<E> emotion_groups{{{E::disappointment, E::disapproval_critique}}};
    const std::vector<m::MultiLabelSample<E>> cases{
        {{E::disapproval_critique}, {E::disappointment}},
        {{E::disappointment, E::interest}, {E::disapproval_critique, E::interest}},
    };
    for (const auto& s : cases) {
        const std::vector<m::MultiLabelSample<E>> one{s};
        c.near(m::hamming_score(one, 18), 16.0 / 18.0, "fixture strict");
        c.near(m::lenient_hamming_score(one, 18, emotion_groups), 1.0, "fixture lenient");
    }
    return c;
}

// ---------------------------------------------------------------- 3

Check top3_dominates_top1() {
    Check c;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    for (int run = 0; run < 100 && c.ok(); ++run) {
        std::vector<G> gold;
        std::vector<std::vector<G>> ranked;
        for (int i = 0; i < 5 + run % 20; ++i) {
            std::array<double, kGibbsPhaseCount> s{};
            for (auto& x : s) x = score(rng) + 1e-6;
            ranked.push_back(GibbsDistribution::from_scores(s).top_k(kGibbsPhaseCount));
            gold.push_back(kGibbsPhases[rng() % kGibbsPhaseCount]);
        }
        const double top1 = m::top_k_containment(gold, ranked, 1);
        const double top3 = m::top_k_containment(gold, ranked, 3);
        c.expect(top3 + kTol >= top1, "run " + std::to_string(run) + ": top-3 below top-1");
    }
    return c;
}

// ---------------------------------------------------------------- 4

/// Three lowest-coverage phases; a stable sort keeps declaration order on ties.
std::set<std::string> lowest_three(const TextProfile& p) {
    std::vector<std::size_t> idx(kGibbsPhaseCount);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return p.gibbs_coverage[a] < p.gibbs_coverage[b]; });
    std::set<std::string> out;
    for (std::size_t i = 0; i < 3; ++i) out.insert("gibbs_missing:" + std::string(to_string(kGibbsPhases[idx[i]])));
    return out;
}

Check reasoner_rules() {
    Check c;
    std::mt19937_64 rng(4);
    const std::vector<EmotionLabel> emotion_pool{EmotionLabel::no_emotion,   EmotionLabel::satisfaction,
                                                 EmotionLabel::motivation,   EmotionLabel::insecurity,
                                                 EmotionLabel::disappointment, EmotionLabel::surprise};
    const std::vector<SentimentPolarity> polarity{SentimentPolarity::positive, SentimentPolarity::negative,
                                                  SentimentPolarity::neutral};
    int saw_positive = 0, saw_negative = 0;
    for (int run = 0; run < 300 && c.ok(); ++run) {
        const std::string tag = "profile " + std::to_string(run) + ": ";
        std::vector<FakeSentence> sentences;
        const int n = 1 + static_cast<int>(rng() % 12);
        // restricting polarity per run makes one-sided summaries common
        const int mode = static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            FakeSentence s{kGibbsPhases[rng() % kGibbsPhaseCount]};
            s.emotions = {emotion_pool[rng() % emotion_pool.size()]};
            s.sentiment = mode == 2 ? polarity[rng() % 3] : polarity[mode];
            if (mode != 2) s.emotions = {EmotionLabel::no_emotion};
            sentences.push_back(s);
        }
        const auto p = fake_profile(sentences);
        const auto triggers = triggers_of(select_prompts(p, db(), static_cast<std::uint64_t>(run)));

        // (a)
        std::set<std::string> gibbs;
        for (const auto& t : triggers) {
            if (t.starts_with("gibbs_missing:")) gibbs.insert(t);
        }
        c.expect(gibbs == lowest_three(p), tag + "(a) gibbs prompts are not the three lowest-coverage phases");

        // (b)
        const bool challenge = contains(triggers, trigger::challenge);
        const bool optimism = contains(triggers, trigger::optimism);
        c.expect(challenge == (p.sentiment_summary == SentimentSummary::all_positive), tag + "(b) challenge rule");
        c.expect(optimism == (p.sentiment_summary == SentimentSummary::all_negative), tag + "(b) optimism rule");
        c.expect(!(challenge && optimism), tag + "(b) both challenge and optimism");
        saw_positive += challenge;
        saw_negative += optimism;
    }
    c.expect(saw_positive > 0 && saw_negative > 0, "(b) random profiles never reached a one-sided summary");

    // (c)
    const std::vector<std::string> names{"Feedback"};
    auto topic_doc = [](std::size_t analysis) {
        std::vector<FakeSentence> s;
        for (std::size_t i = 0; i < analysis; ++i) {
            s.push_back({G::analysis, {EmotionLabel::no_emotion}, SentimentPolarity::neutral, 0});
        }
        s.push_back({G::description, {EmotionLabel::no_emotion}, SentimentPolarity::neutral, 0});
        return s;
    };
    const auto three = fake_profile(topic_doc(3), ReflectiveLevel::description, names);
    const auto four = fake_profile(topic_doc(4), ReflectiveLevel::description, names);
    c.expect(three.topics.size() == 1 && !three.topics[0].well_thought, "(c) 3 analysis sentences marked well thought");
    c.expect(four.topics.size() == 1 && four.topics[0].well_thought, "(c) 4 analysis sentences not marked well thought");
    const MarkerTranslator stub;
    const auto t3 = compose_feedback(select_prompts(three, db(), 0), three, db(), LanguageCode::de(), stub).text;
    const auto t4 = compose_feedback(select_prompts(four, db(), 0), four, db(), LanguageCode::de(), stub).text;
    c.expect(t3.find("Themen nachgedacht: Feedback.") == std::string::npos && t4.find("Themen nachgedacht: Feedback.") != std::string::npos,
             "(c) well-thought topic line does not follow the flag");
    return c;
}

// ---------------------------------------------------------------- 5

std::string analyze_json(const std::string& text, std::uint64_t seed) {
    service::AnalyzeRequest r;
    r.text = text;
    r.seed = seed;
    return service::outcome_message(engine().handle_analyze(r)).dump();
}

Check determinism() {
    Check c;
    const auto text = fixture("essay_de_1000.txt");
    const auto first = analyze_json(text, 11);
    c.expect(first.find("\"type\":\"feedback\"") != std::string::npos, "essay was not accepted");
    c.expect(analyze_json(text, 11) == first, "second run differs");
    std::vector<std::future<std::string>> futures;
    for (int i = 0; i < 8; ++i) futures.push_back(std::async(std::launch::async, [&] { return analyze_json(text, 11); }));
    int same = 0;
    for (auto& f : futures) same += f.get() == first;
    c.expect(same == 8, std::to_string(8 - same) + " of 8 concurrent responses differ");
    return c;
}

// ---------------------------------------------------------------- 6

Check gate_modes() {
    Check c;
    const auto& seg = processor().segmenter();
    const auto forbidden = service::load_forbidden(data_dir() / "lexicons" / "forbidden.txt");
    const auto table = gate_table();
    c.expect(table.size() == 20, "gate table does not have 20 rows");
    for (const auto& row : table) {
        const auto dis = service::validate_submission(row.text, seg, forbidden, service::GateMode::disjunctive);
        const auto con = service::validate_submission(row.text, seg, forbidden, service::GateMode::conjunctive);
        c.expect(dis.sentence_count == row.sentences, "sentence count: " + row.text);
        c.expect(!dis.accepted() == row.blocked_disjunctive, "disjunctive: " + row.text);
        c.expect(!con.accepted() == row.blocked_conjunctive, "conjunctive: " + row.text);
    }
    return c;
}

// ---------------------------------------------------------------- 7

Check latency() {
    Check c;
    const auto text = fixture("essay_de_1000.txt");
    analyze_json(text, 0);  // warm caches
    double best = 1e9;
    for (int i = 0; i < 3; ++i) {
        const auto start = Clock::now();
        analyze_json(text, 0);
        best = std::min(best, seconds_since(start));
    }
    c.expect(best < 1.0, "analysis took " + std::to_string(best) + " s");
    return c;
}

// ---------------------------------------------------------------- 8

Check prompt_lint() {
    Check c;
    for (const auto& d : db().lint()) c.fail(d.subject + ": " + d.message);
    return c;
}

// ---------------------------------------------------------------- 9

Check agreement_extremes() {
    Check c;
    const std::vector<int> run{1, 2, 3, 4, 5, 3, 2};
    c.near(m::quadratic_weighted_kappa(run, run, 5), 1.0, "qwk identical");
    c.near(m::cohen_kappa(run, run), 1.0, "kappa identical");
    const std::vector<int> a{1, 5}, b{5, 1};
    c.near(m::quadratic_weighted_kappa(a, b, 5), -1.0, "qwk maximal disagreement");
    c.near(m::cohen_kappa(a, b), -1.0, "kappa maximal disagreement");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const Criterion criteria[] = {
        {"1 metric oracle equivalence (200 instances, < 10 s)", metric_oracles},
        {"2 lenient hamming >= strict, group fixture 16/18 -> 1.0", lenient_dominates_strict},
        {"3 top-3 containment >= top-1 (100 runs)", top3_dominates_top1},
        {"4 reasoner: lowest phases, sentiment prompts, well-thought flip", reasoner_rules},
        {"5 byte-identical feedback, sequential and 8 concurrent", determinism},
        {"6 gate table, disjunctive and conjunctive", gate_modes},
        {"7 1000-word essay analyzed in < 1 s", latency},
        {"8 bundled prompt database lints clean", prompt_lint},
        {"9 qwk and kappa extremes", agreement_extremes},
    };
    int failures = 0;
    for (const auto& criterion : criteria) {
        Check c;
        try {
            c = criterion.run();
        } catch (const std::exception& e) {
            c.fail(std::string("exception: ") + e.what());
        }
        if (c.ok()) {
            std::cout << "PASS " << criterion.name << '\n';
        } else {
            ++failures;
            std::cout << "FAIL " << criterion.name << " -- " << c.detail << '\n';
        }
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
