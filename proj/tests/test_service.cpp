#include <doctest.h>

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eragent/app.hpp"
#include "eragent/service.hpp"
#include "test_support.hpp"

using namespace eragent;
using nlohmann::json;

namespace {

/// Runtime + live server on an ephemeral port for one test case.
struct ServiceHarness {
    Runtime rt;
    AnswerService service;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit ServiceHarness(AppConfig cfg) : rt(build_runtime(std::move(cfg))), service(rt) {
        service.register_routes(server);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~ServiceHarness() {
        server.stop();
        thread.join();
    }
    httplib::Client client() { return httplib::Client("127.0.0.1", port); }
};

AppConfig service_config() {
    AppConfig cfg;
    cfg.mock_script_path = test::data_dir() + "/mock_eval.json";
    cfg.corpus_path = test::data_dir() + "/corpus_small.jsonl";
    cfg.pipeline.components.rewriter = false;  // mock rules key on the raw question
    cfg.pipeline.components.filter = false;
    return cfg;
}

}  // namespace

TEST_CASE("healthz responds ok") {
    ServiceHarness h(service_config());
    auto res = h.client().Get("/healthz");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "ok");
}

TEST_CASE("v1/answer returns the answer and a trace") {
    ServiceHarness h(service_config());
    auto client = h.client();
    json body{{"user_id", "u1"}, {"question", "which planet is known as the red planet"}};
    auto res = client.Post("/v1/answer", body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto doc = json::parse(res->body);
    CHECK(doc["answer"] == "Mars");
    CHECK(doc["trace"]["external_knowledge_count"].get<int>() >= 1);
    CHECK(doc["trace"]["failed"] == false);

    SUBCASE("malformed body is a 400") {
        auto bad = client.Post("/v1/answer", "{\"user_id\": \"u1\"}", "application/json");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        auto not_json = client.Post("/v1/answer", "not json", "application/json");
        REQUIRE(not_json);
        CHECK(not_json->status == 400);
    }
    SUBCASE("pipeline failure is a 502 with a diagnostic id") {
        json empty{{"user_id", "u1"}, {"question", "   "}};
        auto err = client.Post("/v1/answer", empty.dump(), "application/json");
        REQUIRE(err);
        CHECK(err->status == 502);
        auto edoc = json::parse(err->body);
        CHECK(edoc.contains("diagnostic_id"));
        CHECK(edoc.contains("error"));
    }
}

TEST_CASE("v1/session/end folds the open session into the profile") {
    ServiceHarness h(service_config());
    auto client = h.client();
    json q{{"user_id", "u2"}, {"question", "what is the capital of france"}};
    REQUIRE(client.Post("/v1/answer", q.dump(), "application/json"));
    auto res = client.Post("/v1/session/end", json{{"user_id", "u2"}}.dump(),
                           "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["status"] == "ok");
    CHECK(h.rt.gateway->call_count("profile") >= 1);

    SUBCASE("missing user_id is a 400") {
        auto bad = client.Post("/v1/session/end", "{}", "application/json");
        REQUIRE(bad);
        CHECK(bad->status == 400);
    }
    SUBCASE("ending an empty session performs no profile update") {
        const auto before = h.rt.gateway->call_count("profile");
        auto ok = client.Post("/v1/session/end", json{{"user_id", "fresh"}}.dump(),
                              "application/json");
        REQUIRE(ok);
        CHECK(ok->status == 200);
        CHECK(h.rt.gateway->call_count("profile") == before);
    }
}

TEST_CASE("distinct users have isolated memory and transcripts") {
    ServiceHarness h(service_config());
    auto client = h.client();
    json qa{{"user_id", "alice"}, {"question", "who wrote pride and prejudice"}};
    json qb{{"user_id", "bob"}, {"question", "what is the chemical symbol for gold"}};
    auto ra = client.Post("/v1/answer", qa.dump(), "application/json");
    auto rb = client.Post("/v1/answer", qb.dump(), "application/json");
    REQUIRE(ra);
    REQUIRE(rb);
    CHECK(json::parse(ra->body)["answer"] == "Jane Austen");
    CHECK(json::parse(rb->body)["answer"] == "Au");
}
