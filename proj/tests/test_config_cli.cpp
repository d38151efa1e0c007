#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "eragent/app.hpp"
#include "eragent/cli.hpp"
#include "eragent/config.hpp"
#include "eragent/errors.hpp"
#include "eragent/util.hpp"
#include "test_support.hpp"

using namespace eragent;
using nlohmann::json;

namespace {

int run(std::vector<std::string> args) {
    std::vector<const char*> argv = {"eragent"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("parse_config reads key = value with comments") {
    auto cfg = parse_config(
        "# comment line\n"
        "backend = mock\n"
        "trigger.tau = 0.7   # inline comment\n"
        "trigger.theta = 2\n"
        "retriever.top_k = 3\n"
        "\n"
        "reader.style = personalized\n");
    CHECK(cfg.backend == BackendKind::mock);
    CHECK(cfg.pipeline.trigger.tau == doctest::Approx(0.7));
    CHECK(cfg.pipeline.trigger.theta == 2);
    CHECK(cfg.pipeline.retriever.top_k == 3);
    CHECK(cfg.pipeline.reader_style == ReaderStyle::personalized);
}

TEST_CASE("config validation") {
    AppConfig cfg;
    CHECK_THROWS_AS(cfg.set("no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.set("trigger.tau", "1.5"), ConfigError);
    CHECK_THROWS_AS(cfg.set("trigger.tau", "abc"), ConfigError);
    CHECK_THROWS_AS(cfg.set("trigger.theta", "0"), ConfigError);
    CHECK_THROWS_AS(cfg.set("backend", "cloud"), ConfigError);
    CHECK_THROWS_AS(cfg.set("reader.style", "florid"), ConfigError);
    CHECK_THROWS_AS(parse_config("just a line without equals\n"), ConfigError);

    SUBCASE("overlap must stay below chunk size") {
        cfg.set("retriever.chunk_overlap", "16");
        cfg.set("retriever.chunk_size", "64");
        CHECK(cfg.pipeline.retriever.chunk_size == 64);
        CHECK_THROWS_AS(cfg.set("retriever.chunk_overlap", "64"), ConfigError);
    }
}

TEST_CASE("build_runtime wires the mock backend and local index") {
    AppConfig cfg;
    cfg.mock_script_path = test::data_dir() + "/mock_eval.json";
    cfg.corpus_path = test::data_dir() + "/corpus_small.jsonl";
    Runtime rt = build_runtime(cfg);
    REQUIRE(rt.local_index);
    auto chunks = rt.retrieval()("red planet");
    REQUIRE_FALSE(chunks.empty());
    CHECK(chunks[0].origin == "d6");

    SUBCASE("http backend requires a base url") {
        AppConfig bad;
        bad.backend = BackendKind::http;
        CHECK_THROWS_AS(build_runtime(bad), ConfigError);
    }
    SUBCASE("http search requires a url") {
        AppConfig bad;
        bad.search_mode = SearchMode::http;
        CHECK_THROWS_AS(build_runtime(bad), ConfigError);
    }
    SUBCASE("no retrieval source yields empty results, not errors") {
        AppConfig none;
        CHECK(build_runtime(none).retrieval()("anything").empty());
    }
}

TEST_CASE("cli: usage errors exit with 2") {
    CHECK(run({}) == 2);
    CHECK(run({"eval"}) == 2);                          // --dataset is required
    CHECK(run({"eval", "--dataset", "x", "--setting", "bogus"}) == 2);
    CHECK(run({"no-such-command"}) == 2);
}

TEST_CASE("cli: runtime failures exit with 1") {
    CHECK(run({"--backend", "mock", "eval", "--dataset", "/nonexistent/ds.jsonl"}) == 1);
}

TEST_CASE("cli eval runs end-to-end on the mock backend") {
    namespace fs = std::filesystem;
    auto report_path = fs::temp_directory_path() / "eragent_cli_report.json";
    auto trace_path = fs::temp_directory_path() / "eragent_cli_traces.jsonl";
    fs::remove(report_path);
    fs::remove(trace_path);

    auto cfg_path = fs::temp_directory_path() / "eragent_cli.cfg";
    {
        std::ofstream out(cfg_path);
        out << "backend = mock\n"
            << "mock_script = " << test::data_dir() << "/mock_eval.json\n"
            << "search.corpus = " << test::data_dir() << "/corpus_small.jsonl\n";
    }

    int rc = run({"--config", cfg_path.string(), "--trace-out", trace_path.string(), "eval",
                  "--dataset", test::data_dir() + "/qa_small.jsonl", "--setting", "standard",
                  "--report-json", report_path.string()});
    CHECK(rc == 0);

    auto report = json::parse(util::read_file(report_path.string()));
    CHECK(report["method"] == "standard");
    CHECK(report["dataset"] == "qa_small");
    CHECK(report["n"] == 6);
    CHECK(report["em"].get<double>() == doctest::Approx(100.0));
    CHECK(report["hit_rate"].get<double>() >= report["em"].get<double>());

    // Traces: one JSONL line per item, each with the knowledge counters.
    std::ifstream in(trace_path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        auto doc = json::parse(line);
        CHECK(doc.contains("external_knowledge_count"));
        CHECK(doc["failed"] == false);
        ++lines;
    }
    CHECK(lines == 6);

    SUBCASE("seeded sampling evaluates a subset") {
        int rc2 = run({"--config", cfg_path.string(), "eval", "--dataset",
                       test::data_dir() + "/qa_small.jsonl", "--setting", "standard",
                       "--sample", "3", "--seed", "5", "--report-json", report_path.string()});
        CHECK(rc2 == 0);
        auto sub = json::parse(util::read_file(report_path.string()));
        CHECK(sub["n"] == 3);
    }

    fs::remove(report_path);
    fs::remove(trace_path);
    fs::remove(cfg_path);
}

TEST_CASE("cli gen-msmtqa writes a well-formed corpus") {
    namespace fs = std::filesystem;
    auto out_path = fs::temp_directory_path() / "eragent_cli_msmtqa.json";
    fs::remove(out_path);
    int rc = run({"--backend", "mock", "gen-msmtqa", "--out", out_path.string(), "--sessions",
                  "1", "--rounds", "2", "--seed", "3"});
    CHECK(rc == 0);
    auto doc = json::parse(util::read_file(out_path.string()));
    REQUIRE(doc["users"].size() == 12);
    CHECK(doc["users"][0]["sessions"].size() == 1);
    CHECK(doc["users"][0]["sessions"][0]["rounds"].size() == 2);
    fs::remove(out_path);
}
