#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "eragent/errors.hpp"
#include "eragent/rewriter.hpp"
#include "test_support.hpp"

using namespace eragent;

namespace {

TerminologyDictionary dict(std::map<std::string, std::string> entries) {
    TerminologyDictionary d;
    d.entries = std::move(entries);
    return d;
}

}  // namespace

TEST_CASE("apply_terminology replaces whole words, longest key first") {
    auto d = dict({{"WC", "World Cup"}, {"WC final", "World Cup final"}});
    CHECK(apply_terminology("who won the WC final", d) == "who won the World Cup final");
    CHECK(apply_terminology("who won the WC", d) == "who won the World Cup");

    SUBCASE("no substitution inside a longer word") {
        CHECK(apply_terminology("the WCS bracket", d) == "the WCS bracket");
    }
    SUBCASE("non-overlapping left-to-right scan") {
        auto ab = dict({{"aa", "X"}});
        CHECK(apply_terminology("aa aa aa", ab) == "X X X");
    }
    SUBCASE("replacement text is not rescanned") {
        auto loop = dict({{"ai", "ai model"}});
        CHECK(apply_terminology("what is ai", loop) == "what is ai model");
    }
}

TEST_CASE("terminology dictionary load skips self-mappings and rejects empty keys") {
    namespace fs = std::filesystem;
    auto path = fs::temp_directory_path() / "eragent_terms.json";
    {
        std::ofstream out(path);
        out << R"({"WC": "World Cup", "same": "same"})";
    }
    auto d = TerminologyDictionary::load(path.string());
    CHECK(d.entries.size() == 1);
    CHECK(d.entries.at("WC") == "World Cup");

    {
        std::ofstream out(path);
        out << R"({"": "nothing"})";
    }
    CHECK_THROWS_AS(TerminologyDictionary::load(path.string()), ConfigError);
    fs::remove(path);
}

TEST_CASE("rewrite parses the structured fan-out") {
    auto gw = test::mock_gateway(
        {{"Question: who won wc 2019",
          R"({"rewritten": "who won the cricket world cup 2019",
              "queries": ["cricket world cup 2019 winner",
                          "Cricket World Cup 2019 Winner",
                          "icc world cup 2019 final result"]})"}});
    Rewriter rewriter(*gw);
    auto result = rewriter.rewrite("who won wc 2019");
    CHECK(result.rewritten == "who won the cricket world cup 2019");
    // The second query is a case-variant duplicate and must be removed.
    REQUIRE(result.queries.size() == 2);
    CHECK(result.queries[0] == "cricket world cup 2019 winner");
    CHECK(result.queries[1] == "icc world cup 2019 final result");
}

TEST_CASE("rewrite truncates the fan-out to max_queries") {
    auto gw = test::mock_gateway(
        {{"Question: wide question",
          R"({"rewritten": "wide question", "queries": ["q1", "q2", "q3", "q4", "q5"]})"}});
    RewriterConfig cfg;
    cfg.max_queries = 3;
    Rewriter rewriter(*gw, cfg);
    CHECK(rewriter.rewrite("wide question").queries.size() == 3);
}

TEST_CASE("terminology substitution happens before the model sees the question") {
    auto gw = test::mock_gateway(
        {{"Question: who won the World Cup",
          R"({"rewritten": "who won the World Cup", "queries": ["world cup winner"]})"}});
    Rewriter rewriter(*gw);
    auto result = rewriter.rewrite("who won the WC", dict({{"WC", "World Cup"}}));
    CHECK(result.rewritten == "who won the World Cup");
}

TEST_CASE("single_rewrite mode yields exactly the rewritten question") {
    auto gw = test::mock_gateway(
        {{"Question: who won wc",
          R"({"rewritten": "who won the world cup", "queries": ["a", "b"]})"}});
    RewriterConfig cfg;
    cfg.single_rewrite = true;
    Rewriter rewriter(*gw, cfg);
    auto result = rewriter.rewrite("who won wc");
    REQUIRE(result.queries.size() == 1);
    CHECK(result.queries[0] == "who won the world cup");
}

TEST_CASE("empty fan-out falls back to the rewritten question") {
    auto gw = test::mock_gateway(
        {{"Question: lonely", R"({"rewritten": "lonely question", "queries": []})"}});
    Rewriter rewriter(*gw);
    auto result = rewriter.rewrite("lonely");
    REQUIRE(result.queries.size() == 1);
    CHECK(result.queries[0] == "lonely question");
}

TEST_CASE("rewrite failure modes") {
    SUBCASE("empty question") {
        auto gw = test::mock_gateway({});
        CHECK_THROWS_AS(Rewriter(*gw).rewrite(""), InvalidQuestion);
        CHECK_THROWS_AS(Rewriter(*gw).rewrite("   "), InvalidQuestion);
    }
    SUBCASE("unparseable output raises RewriteFailed after the re-ask") {
        auto gw = test::mock_gateway({}, "free prose, never JSON");
        CHECK_THROWS_AS(Rewriter(*gw).rewrite("some question"), RewriteFailed);
    }
    SUBCASE("rewrite_or_fallback degrades to the original question") {
        auto gw = test::mock_gateway({}, "free prose, never JSON");
        auto result = Rewriter(*gw).rewrite_or_fallback("some question");
        CHECK(result.rewritten == "some question");
        REQUIRE(result.queries.size() == 1);
        CHECK(result.queries[0] == "some question");
    }
}
