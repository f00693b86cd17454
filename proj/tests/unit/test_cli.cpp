#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "reflect/cli/commands.hpp"
#include "support.hpp"

using namespace reflect;
using reflect::testing::fixture_dir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "reflect");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture_path(const char* name) { return (fixture_dir() / name).string(); }

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("reflect_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, AnalyzeTextReport) {
    const auto r = run({"analyze", fixture_path("essay_en.txt"), "--seed", "4"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("language: en"), std::string::npos);
    EXPECT_NE(r.out.find("seed: 4"), std::string::npos);
    EXPECT_NE(r.out.find("feedback:"), std::string::npos);
    EXPECT_NE(r.err.find(" ms"), std::string::npos);
}

TEST(Cli, AnalyzeIsDeterministic) {
    const auto a = run({"analyze", fixture_path("essay_de_1000.txt"), "--format", "json", "--seed", "8"});
    const auto b = run({"analyze", fixture_path("essay_de_1000.txt"), "--format", "json", "--seed", "8"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["result"]["type"], "feedback");
}

TEST(Cli, GateRejectionExitsOne) {
    const auto r = run({"analyze", fixture_path("two_sentences.txt")});
    EXPECT_EQ(r.code, cli::kRejected);
    EXPECT_NE(r.out.find("too_short"), std::string::npos);
}

TEST(Cli, ConjunctiveGateAcceptsShortCleanText) {
    const auto r = run({"analyze", fixture_path("two_sentences.txt"), "--gate-mode", "conjunctive"});
    EXPECT_EQ(r.code, cli::kOk);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run({"analyze", "/nonexistent.txt"}).code, cli::kInputError);
    EXPECT_EQ(run({"analyze", fixture_path("essay_en.txt"), "--lang", "english"}).code, cli::kInputError);
    EXPECT_EQ(run({"analyze", fixture_path("essay_en.txt"), "--format", "xml"}).code, cli::kInputError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kInputError);
    EXPECT_EQ(run({"--data-dir", "/nonexistent", "analyze", fixture_path("essay_en.txt")}).code, cli::kInputError);
}

TEST(Cli, AnalyzeWritesReportFiles) {
    const auto dir = temp_dir("out");
    const auto r = run({"analyze", fixture_path("essay_en.txt"), fixture_path("essay_es.txt"), "--out", dir.string(),
                        "--format", "json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(std::filesystem::exists(dir / "essay_en.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "essay_es.json"));
    std::filesystem::remove_all(dir);
}

TEST(Cli, PromptsLint) {
    const auto ok = run({"prompts-lint"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("ok: 16 records cover 16 reachable triggers"), std::string::npos);

    const auto dir = temp_dir("lint");
    auto j = nlohmann::json::parse(read_file(reflect::testing::data_dir() / "prompts.json"));
    j["records"].erase(0);
    std::ofstream(dir / "gap.json") << j.dump();
    std::ofstream(dir / "broken.json") << "{";
    const auto gap = run({"prompts-lint", (dir / "gap.json").string()});
    EXPECT_EQ(gap.code, 1);
    EXPECT_NE(gap.out.find("gibbs_missing:description: no record"), std::string::npos);
    EXPECT_EQ(run({"prompts-lint", (dir / "broken.json").string()}).code, 2);
    std::filesystem::remove_all(dir);
}

TEST(Cli, EvalWithCompare) {
    const auto dir = temp_dir("eval");
    std::ofstream(dir / "gold.jsonl") << "{\"id\": 1, \"level\": 1}\n{\"id\": 2, \"level\": 5}\n";
    std::ofstream(dir / "a.jsonl") << "{\"id\": 1, \"level\": 5}\n{\"id\": 2, \"level\": 1}\n";
    std::ofstream(dir / "b.jsonl") << "{\"id\": 1, \"level\": 1}\n{\"id\": 2, \"level\": 5}\n";
    const auto json = run({"eval", "--task", "level", "--gold", (dir / "gold.jsonl").string(), "--pred",
                           (dir / "a.jsonl").string(), "--compare", (dir / "b.jsonl").string(), "--format", "json"});
    ASSERT_EQ(json.code, 0) << json.err;
    const auto j = nlohmann::json::parse(json.out);
    EXPECT_DOUBLE_EQ(j["metrics"]["qwk"].get<double>(), -1.0);
    EXPECT_DOUBLE_EQ(j["delta"]["qwk"].get<double>(), 2.0);

    const auto text = run({"eval", "--task", "level", "--gold", (dir / "gold.jsonl").string(), "--pred",
                           (dir / "a.jsonl").string()});
    EXPECT_EQ(text.code, 0);
    EXPECT_NE(text.out.find("qwk"), std::string::npos);

    std::ofstream(dir / "c.jsonl") << "{\"id\": 1, \"level\": 1}\n{\"id\": 3, \"level\": 5}\n";
    const auto mismatch = run({"eval", "--task", "level", "--gold", (dir / "gold.jsonl").string(), "--pred",
                               (dir / "c.jsonl").string()});
    EXPECT_EQ(mismatch.code, 2);
    EXPECT_NE(mismatch.err.find("id_mismatch"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, CorpusStats) {
    const auto r = run({"corpus-stats", fixture_dir().string(), "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["files"], 5);
    EXPECT_EQ(j["languages"]["de"], 2);
    EXPECT_EQ(j["languages"]["en"], 1);
    EXPECT_EQ(j["languages"]["fr"], 1);
}

TEST(Cli, ConfigFileIsHonoured) {
    const auto dir = temp_dir("config");
    std::ofstream(dir / "c.json") << R"({"min_sentences": 1})";
    const auto r = run({"--config", (dir / "c.json").string(), "analyze", fixture_path("two_sentences.txt")});
    EXPECT_EQ(r.code, 0);
    std::ofstream(dir / "bad.json") << R"({"min_sentences": "many"})";
    EXPECT_EQ(run({"--config", (dir / "bad.json").string(), "analyze", fixture_path("two_sentences.txt")}).code, 2);
    std::filesystem::remove_all(dir);
}
