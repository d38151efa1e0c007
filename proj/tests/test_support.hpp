#pragma once

#include <memory>
#include <string>

#include "eragent/errors.hpp"
#include "eragent/llm_gateway.hpp"

namespace eragent::test {

inline std::string data_dir() { return TEST_DATA_DIR; }

/// Backend that always fails, for degradation-path tests.
class ThrowingBackend : public LlmBackend {
public:
    std::string complete(const ChatRequest&) override {
        throw BackendUnavailable("backend down (test)");
    }
};

inline std::shared_ptr<LlmGateway> mock_gateway(std::vector<MockScript::Rule> rules,
                                                std::string default_response = "UNKNOWN") {
    auto backend = std::make_shared<MockBackend>(
        MockScript(std::move(rules), std::move(default_response)));
    return std::make_shared<LlmGateway>(backend);
}

inline std::shared_ptr<LlmGateway> failing_gateway() {
    return std::make_shared<LlmGateway>(std::make_shared<ThrowingBackend>());
}

}  // namespace eragent::test
