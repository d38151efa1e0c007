#include "eragent/service.hpp"

#include <atomic>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

AnswerService::UserState& AnswerService::user_state(const std::string& user_id) {
    std::lock_guard lock(users_mu_);
    auto& slot = users_[user_id];
    if (!slot) {
        slot = std::make_unique<UserState>();
        if (!rt_.cfg.memory_path.empty()) {
            slot->memory = MemoryStore::load(rt_.cfg.memory_path + "/" + user_id + ".jsonl");
        }
        if (!rt_.cfg.profile_path.empty()) {
            slot->profile = UserProfile::load(rt_.cfg.profile_path + "/" + user_id + ".json");
        }
        slot->transcript.session_id = "svc-" + user_id;
    }
    return *slot;
}

void AnswerService::register_routes(httplib::Server& server) {
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    server.Post("/v1/answer", [this](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("question") ||
            !body.contains("user_id")) {
            res.status = 400;
            res.set_content(json{{"error", "body must be {user_id, question}"}}.dump(),
                            "application/json");
            return;
        }
        const std::string user_id = body["user_id"].get<std::string>();
        const std::string question = body["question"].get<std::string>();
        UserState& state = user_state(user_id);
        std::lock_guard round_lock(state.mu);
        try {
            Pipeline pipeline = rt_.make_pipeline();
            auto [answer, trace] =
                pipeline.answer_question(question, state.memory, state.profile,
                                         state.transcript.session_id,
                                         static_cast<int>(state.transcript.turns.size()));
            state.transcript.turns.push_back(
                {question, answer.text, static_cast<int>(state.transcript.turns.size())});
            json out{{"answer", answer.text}, {"trace", trace_to_json(trace)}};
            res.set_content(out.dump(), "application/json");
        } catch (const Error& e) {
            static std::atomic<int> diag_counter{0};
            res.status = 502;
            res.set_content(json{{"error", e.what()},
                                 {"diagnostic_id", "diag-" + std::to_string(++diag_counter)}}
                                .dump(),
                            "application/json");
        }
    });

    server.Post("/v1/session/end", [this](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("user_id")) {
            res.status = 400;
            res.set_content(json{{"error", "body must be {user_id}"}}.dump(),
                            "application/json");
            return;
        }
        const std::string user_id = body["user_id"].get<std::string>();
        UserState& state = user_state(user_id);
        std::lock_guard round_lock(state.mu);
        if (!state.transcript.turns.empty()) {
            Learner learner(*rt_.gateway, *rt_.embedder);
            state.profile = learner.update_profile(state.profile, state.transcript);
            state.transcript.turns.clear();
            if (!rt_.cfg.profile_path.empty()) {
                state.profile.save(rt_.cfg.profile_path + "/" + user_id + ".json");
            }
            if (!rt_.cfg.memory_path.empty()) {
                state.memory.persist_to(rt_.cfg.memory_path + "/" + user_id + ".jsonl");
            }
        }
        res.set_content(json{{"status", "ok"}}.dump(), "application/json");
    });
}

}  // namespace eragent
