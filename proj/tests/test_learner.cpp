#include <doctest.h>

#include <filesystem>

#include "eragent/embedder.hpp"
#include "eragent/learner.hpp"
#include "eragent/util.hpp"
#include "test_support.hpp"

using namespace eragent;

namespace {

KnowledgeChunk external_chunk(const std::string& id, const std::string& text) {
    KnowledgeChunk c;
    c.id = id;
    c.text = text;
    c.source = ChunkSource::external;
    return c;
}

}  // namespace

TEST_CASE("summarize_snippet uses the model, capped at 200 characters") {
    LexicalEmbedder e;
    auto gw = test::mock_gateway({{"Passage:\nlong passage text", "short summary"}});
    Learner learner(*gw, e);
    CHECK(learner.summarize_snippet("long passage text") == "short summary");

    SUBCASE("overlong model output is truncated") {
        std::string big(500, 'x');
        auto gw2 = test::mock_gateway({}, big);
        Learner l2(*gw2, e);
        CHECK(l2.summarize_snippet("anything").size() == 200);
    }
    SUBCASE("backend failure falls back to the first sentence") {
        auto gw2 = test::failing_gateway();
        Learner l2(*gw2, e);
        CHECK(l2.summarize_snippet("First sentence. Second sentence.") == "First sentence.");
    }
}

TEST_CASE("first_sentence_truncated") {
    CHECK(Learner::first_sentence_truncated("One. Two.") == "One.");
    CHECK(Learner::first_sentence_truncated("No terminator here") == "No terminator here");
    CHECK(Learner::first_sentence_truncated(std::string(300, 'a') + ". rest").size() == 200);
}

TEST_CASE("update_memory stores snippet/content pairs for external chunks") {
    LexicalEmbedder e;
    auto gw = test::mock_gateway({{"Passage:\nfull content one", "summary one"},
                                  {"Passage:\nfull content two", "summary two"}});
    Learner learner(*gw, e);
    MemoryStore store;
    int added = learner.update_memory(
        store, {external_chunk("c1", "full content one"), external_chunk("c2", "full content two")},
        "s1", 0);
    CHECK(added == 2);
    REQUIRE(store.size() == 2);
    const auto records = store.records();
    const auto& r = records[0];
    CHECK(r.snippet == "summary one");
    CHECK(r.content == "full content one");
    CHECK(r.id == "m-" + util::sha256_hex("summary one").substr(0, 16));
    CHECK(r.created_session == "s1");
    CHECK(dot(r.embedding, e.embed("summary one")) == doctest::Approx(1.0).epsilon(1e-9));

    SUBCASE("repeat ingestion is idempotent") {
        CHECK(learner.update_memory(store, {external_chunk("c1", "full content one")}, "s2", 1) ==
              0);
        CHECK(store.size() == 2);
    }
    SUBCASE("memory-sourced chunks are not re-stored") {
        KnowledgeChunk mem = external_chunk("m9", "from memory");
        mem.source = ChunkSource::memory;
        CHECK(learner.update_memory(store, {mem}, "s2", 1) == 0);
    }
}

TEST_CASE("update_memory persists when the store is file-backed") {
    namespace fs = std::filesystem;
    auto path = fs::temp_directory_path() / "eragent_learner_mem.jsonl";
    fs::remove(path);
    LexicalEmbedder e;
    auto gw = test::mock_gateway({}, "a generic summary");
    Learner learner(*gw, e);
    MemoryStore store;
    store.set_persistence_path(path.string());
    learner.update_memory(store, {external_chunk("c1", "persisted content")}, "s1", 0);
    auto reloaded = MemoryStore::load(path.string());
    REQUIRE(reloaded.size() == 1);
    CHECK(reloaded.records()[0].content == "persisted content");
    fs::remove(path);
}

TEST_CASE("merge_profiles: latest attitude wins, lists dedup, keys merge") {
    UserProfile existing;
    existing.theme_preferences = {{"Technology", Attitude::interest},
                                  {"Sports", Attitude::neutrality}};
    existing.question_demands = {"wants concise answers"};
    existing.basic_information = {{"residence", "Lyon"}};
    existing.personalized_information = {"runs marathons"};

    UserProfile incremental;
    incremental.theme_preferences = {{"technology", Attitude::disinterest},
                                     {"Cooking", Attitude::interest}};
    incremental.question_demands = {"Wants concise answers", "asks for sources"};
    incremental.basic_information = {{"Residence", "Paris"}, {"employer", "Acme"}};
    incremental.personalized_information = {"vegetarian"};

    auto merged = Learner::merge_profiles(existing, incremental, "s7");
    CHECK(merged.last_updated_session == "s7");
    REQUIRE(merged.theme_preferences.size() == 3);
    CHECK(merged.theme_preferences[0].second == Attitude::disinterest);  // overwritten
    CHECK(merged.theme_preferences[2].first == "Cooking");
    REQUIRE(merged.question_demands.size() == 2);  // case-variant deduped
    CHECK(merged.question_demands[1] == "asks for sources");
    REQUIRE(merged.basic_information.size() == 2);
    CHECK(merged.basic_information[0].second == "Paris");  // incremental wins
    CHECK(merged.personalized_information.size() == 2);

    SUBCASE("empty incremental only bumps the session stamp") {
        auto same = Learner::merge_profiles(existing, UserProfile{}, "s8");
        CHECK(same.last_updated_session == "s8");
        CHECK(same.theme_preferences == existing.theme_preferences);
    }
}

TEST_CASE("update_profile extracts the four facets from a transcript") {
    LexicalEmbedder e;
    auto gw = test::mock_gateway(
        {{"Transcript:\nUser: what gpu should i buy",
          R"({"theme_preferences": [["technology", "interest"]],
              "question_demands": ["wants purchase advice"],
              "basic_information": [["budget", "1000 euros"]],
              "personalized_information": ["pc gamer"]})"}});
    Learner learner(*gw, e);
    SessionTranscript transcript;
    transcript.session_id = "s1";
    transcript.turns = {{"what gpu should i buy", "Consider a mid-range card.", 0}};
    auto profile = learner.update_profile(UserProfile{}, transcript);
    CHECK(profile.last_updated_session == "s1");
    REQUIRE(profile.theme_preferences.size() == 1);
    CHECK(profile.theme_preferences[0] ==
          std::pair<std::string, Attitude>{"technology", Attitude::interest});
    CHECK(profile.basic_information[0].second == "1000 euros");
    CHECK(profile.question_demands[0] == "wants purchase advice");
    CHECK(profile.personalized_information[0] == "pc gamer");
}

TEST_CASE("update_profile failure leaves facets unchanged with a warning") {
    LexicalEmbedder e;
    auto gw = test::failing_gateway();
    Learner learner(*gw, e);
    UserProfile existing;
    existing.question_demands = {"existing demand"};
    SessionTranscript transcript;
    transcript.session_id = "s9";
    transcript.turns = {{"q", "a", 0}};
    std::vector<std::string> warnings;
    auto profile = learner.update_profile(existing, transcript, &warnings);
    CHECK(profile.question_demands == existing.question_demands);
    CHECK(profile.last_updated_session == "s9");
    CHECK(warnings.size() == 1);
}

TEST_CASE("profile serialization round-trips and orders facets deterministically") {
    UserProfile p;
    p.basic_information = {{"residence", "Lyon"}};
    p.theme_preferences = {{"cooking", Attitude::interest}};
    p.question_demands = {"wants recipes"};
    p.personalized_information = {"vegetarian"};
    p.last_updated_session = "s3";

    const std::string text = p.serialize();
    CHECK(text.find("Lyon") < text.find("cooking"));
    CHECK(text.find("cooking (interest)") != std::string::npos);
    CHECK(text.find("wants recipes") < text.find("vegetarian"));

    auto round = UserProfile::from_json(p.to_json());
    CHECK(round.theme_preferences == p.theme_preferences);
    CHECK(round.basic_information == p.basic_information);
    CHECK(round.question_demands == p.question_demands);
    CHECK(round.personalized_information == p.personalized_information);
    CHECK(round.last_updated_session == "s3");

    SUBCASE("save/load and missing file") {
        namespace fs = std::filesystem;
        auto path = fs::temp_directory_path() / "eragent_profile.json";
        p.save(path.string());
        CHECK(UserProfile::load(path.string()).theme_preferences == p.theme_preferences);
        fs::remove(path);
        CHECK(UserProfile::load(path.string()).facets_empty());
    }
}
