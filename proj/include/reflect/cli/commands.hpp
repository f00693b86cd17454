#pragma once

// Subcommands of the `reflect` tool. Each returns the process exit code:
// 0 success, 1 domain rejection (gate, lint gaps), 2 input or schema error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/asio/signal_set.hpp>

#include "reflect/core/error.hpp"
#include "reflect/core/lexicon.hpp"
#include "reflect/metrics/eval_run.hpp"
#include "reflect/reasoner/prompt_db.hpp"
#include "reflect/service/config.hpp"
#include "reflect/service/engine.hpp"
#include "reflect/service/server.hpp"
#include "reflect/service/wire.hpp"

namespace reflect::cli {

inline constexpr int kOk = 0;
inline constexpr int kRejected = 1;
inline constexpr int kInputError = 2;

enum class Format { text, json };

inline Format parse_format(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "json") return Format::json;
    throw Error(Errc::config_error, "format must be 'text' or 'json'");
}

// ------------------------------------------------------------------ analyze

struct AnalyzeOptions {
    std::vector<std::filesystem::path> files;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> lang;
    std::optional<std::string> clustering;
    std::optional<std::filesystem::path> out_dir;
    Format format = Format::text;
};

inline std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

/// Human-readable report. Contains nothing run-dependent, so the same
/// input and seed give the same bytes.
inline std::string text_report(const std::string& name, const service::AnalyzeOutcome& outcome) {
    std::ostringstream os;
    os << "== " << name << " ==\n";
    if (const auto* gate = std::get_if<service::GateResult>(&outcome)) {
        os << "revision requested (" << gate->sentence_count << " sentences)\n";
        for (const auto& r : gate->reasons) {
            os << "  " << service::to_string(r.kind);
            if (!r.match.empty()) os << ": " << r.match;
            os << '\n';
        }
        return os.str();
    }
    const auto& f = std::get<FeedbackResponse>(outcome);
    os << "language: " << f.language.tag() << "\n";
    os << "level: " << to_int(f.level) << " (" << to_string(f.level) << ")\n";
    os << "seed: " << f.plan.seed << "\n";
    os << "vector:";
    for (double v : f.feature_vector) os << ' ' << fixed3(v);
    os << "\n\nfeedback:\n" << f.text << "\n\nannotations:\n";
    for (const auto& a : f.annotations) {
        os << "  [" << a.sentence << "] " << a.start << '-' << a.end;
        for (const auto& l : a.labels) os << ' ' << l.source << '=' << l.label;
        os << '\n';
    }
    return os.str();
}

inline std::string json_report(const std::string& name, const service::AnalyzeOutcome& outcome) {
    service::json j{{"file", name}, {"result", service::outcome_message(outcome)}};
    return j.dump(2) + "\n";
}

inline int run_analyze(const AnalyzeOptions& o, const service::Engine& engine, std::ostream& out, std::ostream& err) {
    int code = kOk;
    for (const auto& path : o.files) {
        std::string text;
        try {
            text = read_file(path, Errc::empty_input);
        } catch (const Error& e) {
            err << path.string() << ": cannot read file\n";
            code = kInputError;
            continue;
        }
        service::AnalyzeRequest req;
        req.text = std::move(text);
        req.author_id = "cli";
        req.seed = o.seed;
        try {
            if (o.lang) req.feedback_language = LanguageCode::from_tag(*o.lang);
            if (o.clustering) req.clustering = parse_clustering(*o.clustering);
        } catch (const Error& e) {
            err << e.what() << '\n';
            return kInputError;
        }
        const auto started = std::chrono::steady_clock::now();
        service::AnalyzeOutcome outcome;
        try {
            outcome = engine.handle_analyze(req);
        } catch (const Error& e) {
            err << path.string() << ": " << e.what() << '\n';
            code = kInputError;
            continue;
        }
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        err << path.string() << ": " << fixed3(ms) << " ms\n";
        const bool rejected = std::holds_alternative<service::GateResult>(outcome);
        if (rejected && code == kOk) code = kRejected;
        const auto report = o.format == Format::json ? json_report(path.string(), outcome)
                                                     : text_report(path.string(), outcome);
        if (o.out_dir) {
            std::filesystem::create_directories(*o.out_dir);
            const auto target = *o.out_dir / (path.stem().string() + (o.format == Format::json ? ".json" : ".txt"));
            std::ofstream f(target, std::ios::binary);
            f << report;
            if (!f) {
                err << target.string() << ": cannot write report\n";
                code = kInputError;
            }
        } else {
            out << report;
        }
    }
    return code;
}

// --------------------------------------------------------------------- eval

struct EvalOptions {
    std::filesystem::path gold;
    std::filesystem::path pred;
    std::optional<std::filesystem::path> compare;
    std::string task = "emotions";
    Format format = Format::text;
    std::size_t scheme_size = 18;
    std::string hamming = "loss";
};

inline int run_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
    metrics::EvalReport report, other;
    try {
        metrics::EvalConfig config;
        config.emotion_scheme_size = o.scheme_size;
        if (o.hamming == "jaccard") {
            config.hamming = metrics::HammingMode::jaccard;
        } else if (o.hamming != "loss") {
            throw Error(Errc::config_error, "hamming must be 'loss' or 'jaccard'");
        }
        const auto task = metrics::parse_task(o.task);
        report = metrics::evaluate_run(o.gold, o.pred, task, config);
        if (o.compare) other = metrics::evaluate_run(o.gold, *o.compare, task, config);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kInputError;
    }
    if (o.format == Format::json) {
        auto j = metrics::to_json(report);
        if (o.compare) j["delta"] = metrics::absolute_deltas(report, other);
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "task: " << o.task << "  samples: " << report.sample_count << "  scheme: " << report.label_scheme << '\n';
    const auto deltas = o.compare ? metrics::absolute_deltas(report, other) : std::map<std::string, double>{};
    for (const auto& [name, value] : report.values) {
        char line[128];
        std::snprintf(line, sizeof line, "%-24s %9.6f", name.c_str(), value);
        out << line;
        if (auto it = deltas.find(name); it != deltas.end()) {
            std::snprintf(line, sizeof line, "  %+9.6f", it->second);
            out << line;
        }
        out << '\n';
    }
    return kOk;
}

// ------------------------------------------------------------ prompts-lint

inline int run_prompts_lint(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
    PromptDb db;
    try {
        db = PromptDb::load(path);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kInputError;
    }
    const auto problems = db.lint();
    for (const auto& d : problems) out << d.subject << ": " << d.message << '\n';
    if (!problems.empty()) {
        out << problems.size() << " problem(s) in " << path.string() << '\n';
        return kRejected;
    }
    out << "ok: " << db.records().size() << " records cover " << trigger::reachable().size()
        << " reachable triggers in de, en, es\n";
    return kOk;
}

// ------------------------------------------------------------ corpus-stats

inline int run_corpus_stats(const std::filesystem::path& dir, const service::Engine& engine, Format format,
                            std::ostream& out, std::ostream& err) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        err << dir.string() << ": not a directory\n";
        return kInputError;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, std::size_t> languages;
    std::array<std::size_t, kGibbsPhaseCount> phases{};
    std::map<int, std::size_t> levels;
    std::size_t sentences = 0, analyzed = 0, skipped = 0;
    for (const auto& f : files) {
        try {
            const auto doc = engine.analyze_document(read_file(f), engine.config().clustering);
            ++languages[doc.source_language.tag()];
            ++levels[to_int(doc.level)];
            sentences += doc.sentences.size();
            for (const auto& s : doc.sentences) ++phases[index_of(s.gibbs.argmax())];
            ++analyzed;
        } catch (const Error& e) {
            err << f.string() << ": skipped (" << e.what() << ")\n";
            ++skipped;
        }
    }
    if (format == Format::json) {
        service::json j;
        j["files"] = analyzed;
        j["skipped"] = skipped;
        j["sentences"] = sentences;
        j["languages"] = languages;
        service::json ph;
        for (auto p : kGibbsPhases) ph[std::string(to_string(p))] = phases[index_of(p)];
        j["gibbs_histogram"] = ph;
        service::json lv;
        for (const auto& [k, v] : levels) lv[std::to_string(k)] = v;
        j["levels"] = lv;
        out << j.dump(2) << '\n';
    } else {
        out << "files: " << analyzed << " (skipped " << skipped << ")\n";
        out << "sentences: " << sentences << '\n';
        out << "languages:";
        for (const auto& [k, v] : languages) out << ' ' << k << '=' << v;
        out << "\ngibbs:";
        for (auto p : kGibbsPhases) {
            const double share = sentences == 0 ? 0.0 : static_cast<double>(phases[index_of(p)]) / sentences;
            out << ' ' << to_string(p) << '=' << phases[index_of(p)] << " (" << fixed3(share) << ')';
        }
        out << "\nlevels:";
        for (const auto& [k, v] : levels) out << ' ' << k << '=' << v;
        out << '\n';
    }
    return kOk;
}

// -------------------------------------------------------------------- serve

inline int run_serve(const service::ServiceConfig& config, std::ostream& out, std::ostream& err) {
    std::unique_ptr<service::Engine> engine;
    try {
        engine = service::Engine::load(config);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kInputError;
    }
    service::Server server(*engine, config.listen_address, config.port, config.workers);
    boost::asio::io_context signals_ctx;
    boost::asio::signal_set signals(signals_ctx, SIGINT, SIGTERM);
    signals.async_wait([&](const boost::system::error_code&, int) { server.stop(); });
    std::thread signal_thread([&] { signals_ctx.run(); });
    out << "listening on " << config.listen_address << ':' << server.port() << std::endl;
    server.run();
    signals_ctx.stop();
    signal_thread.join();
    return kOk;
}

// ---------------------------------------------------------------- dispatch

/// Parses `argv` and runs the chosen subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feedback engine for reflective essays", "reflect"};
    app.require_subcommand(1, 1);

    std::optional<std::filesystem::path> config_path;
    std::optional<std::string> data_dir;
    app.add_option("--config", config_path, "JSON config file (else $REFLECT_CONFIG)");
    app.add_option("--data-dir", data_dir, "data directory with lexicons, cues, topics and prompts");

    AnalyzeOptions analyze;
    std::string analyze_format = "text";
    std::optional<std::string> gate_mode;
    auto* a = app.add_subcommand("analyze", "analyze essay files and print feedback");
    a->add_option("files", analyze.files, "input files")->required()->check(CLI::ExistingFile);
    a->add_option("--seed", analyze.seed, "prompt variant seed");
    a->add_option("--lang", analyze.lang, "feedback language tag");
    a->add_option("--clustering", analyze.clustering, "pedagogy_specific | general_educational");
    a->add_option("--out", analyze.out_dir, "write one report per input into this directory");
    a->add_option("--format", analyze_format, "text | json")->check(CLI::IsMember({"text", "json"}));
    a->add_option("--gate-mode", gate_mode, "disjunctive | conjunctive")
        ->check(CLI::IsMember({"disjunctive", "conjunctive"}));

    std::optional<std::string> address, port, store, workers;
    auto* s = app.add_subcommand("serve", "run the HTTP/WebSocket service");
    s->add_option("--listen", address, "listen address");
    s->add_option("--port", port, "port (0 picks a free one)");
    s->add_option("--store", store, "JSON-lines history file");
    s->add_option("--workers", workers, "analysis worker threads");
    s->add_option("--gate-mode", gate_mode, "disjunctive | conjunctive")
        ->check(CLI::IsMember({"disjunctive", "conjunctive"}));

    EvalOptions eval;
    std::string eval_format = "text";
    auto* e = app.add_subcommand("eval", "compare a prediction run with gold annotations");
    e->add_option("--gold", eval.gold, "gold JSON-lines file")->required();
    e->add_option("--pred", eval.pred, "prediction JSON-lines file")->required();
    e->add_option("--compare", eval.compare, "second prediction run; prints absolute deltas");
    e->add_option("--task", eval.task, "emotions | gibbs | level")->check(CLI::IsMember({"emotions", "gibbs", "level"}));
    e->add_option("--format", eval_format, "text | json")->check(CLI::IsMember({"text", "json"}));
    e->add_option("--scheme-size", eval.scheme_size, "emotion label count for hamming");
    e->add_option("--hamming", eval.hamming, "loss | jaccard")->check(CLI::IsMember({"loss", "jaccard"}));

    std::optional<std::filesystem::path> prompts_path;
    auto* l = app.add_subcommand("prompts-lint", "check a prompt database for gaps");
    l->add_option("db", prompts_path, "prompt database (default: bundled)");

    std::filesystem::path corpus_dir;
    std::string corpus_format = "text";
    auto* c = app.add_subcommand("corpus-stats", "sentence, language and Gibbs statistics over *.txt files");
    c->add_option("dir", corpus_dir, "corpus directory")->required();
    c->add_option("--format", corpus_format, "text | json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& pe) {
        err << pe.what() << '\n';
        return kInputError;
    }

    std::map<std::string, std::string> overrides;
    if (data_dir) overrides["data_dir"] = *data_dir;
    if (gate_mode) overrides["gate_mode"] = *gate_mode;
    if (address) overrides["listen_address"] = *address;
    if (port) overrides["port"] = *port;
    if (store) overrides["store_path"] = *store;
    if (workers) overrides["workers"] = *workers;

    service::ServiceConfig config;
    try {
        config = service::resolve_config(config_path, overrides);
    } catch (const Error& ex) {
        err << ex.what() << '\n';
        return kInputError;
    }

    if (*l) return run_prompts_lint(prompts_path.value_or(config.prompts()), out, err);
    if (*e) {
        eval.format = parse_format(eval_format);
        return run_eval(eval, out, err);
    }
    if (*s) return run_serve(config, out, err);

    std::unique_ptr<service::Engine> engine;
    try {
        engine = service::Engine::load(config);
    } catch (const Error& ex) {
        err << ex.what() << '\n';
        return kInputError;
    }
    if (*a) {
        analyze.format = parse_format(analyze_format);
        return run_analyze(analyze, *engine, out, err);
    }
    return run_corpus_stats(corpus_dir, *engine, parse_format(corpus_format), out, err);
}

}  // namespace reflect::cli
