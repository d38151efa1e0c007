#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "eragent/app.hpp"
#include "eragent/learner.hpp"

namespace httplib {
class Server;
}

namespace eragent {

/// HTTP answering service. Rounds are serialized per user_id; distinct users
/// proceed independently.
class AnswerService {
public:
    explicit AnswerService(const Runtime& runtime) : rt_(runtime) {}

    /// POST /v1/answer {user_id, question} -> {answer, trace}
    /// POST /v1/session/end {user_id} -> profile update from the open session
    /// GET /healthz -> "ok"
    void register_routes(httplib::Server& server);

private:
    struct UserState {
        MemoryStore memory;
        UserProfile profile;
        SessionTranscript transcript;
        std::mutex mu;
    };

    UserState& user_state(const std::string& user_id);

    const Runtime& rt_;
    std::mutex users_mu_;
    std::map<std::string, std::unique_ptr<UserState>> users_;
};

}  // namespace eragent
