#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eragent {

struct ChatMessage {
    std::string role;  // system | user | assistant
    std::string content;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 1024;
    std::string model_id = "gpt-3.5-turbo";

    static ChatRequest single_user(std::string prompt);
};

/// Text template with {name} placeholders. A placeholder is a brace pair
/// enclosing an identifier; any other brace content is literal, so JSON
/// examples can live in template bodies.
class PromptTemplate {
public:
    PromptTemplate() = default;
    PromptTemplate(std::string name, std::string body, std::set<std::string> required_vars);

    const std::string& name() const { return name_; }
    const std::string& body() const { return body_; }
    const std::set<std::string>& required_vars() const { return required_vars_; }

    /// Substitutes every placeholder. Throws MissingVariable for an unbound
    /// required variable and TemplateMalformed for a placeholder that is
    /// neither bound nor declared required.
    std::string render(const std::map<std::string, std::string>& vars) const;

private:
    std::string name_;
    std::string body_;
    std::set<std::string> required_vars_;
};

/// Ordered substring/regex rules over the rendered prompt; first match wins.
class MockScript {
public:
    struct Rule {
        std::string match;
        std::string response;
        bool is_regex = false;
    };

    MockScript() = default;
    MockScript(std::vector<Rule> rules, std::string default_response);

    static MockScript from_json(const nlohmann::json& doc);
    static MockScript load(const std::string& path);

    const std::string& respond(const std::string& prompt) const;

private:
    std::vector<Rule> rules_;
    std::string default_response_ = "UNKNOWN";
};

/// Backend contract: turn a chat request into completion text.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

class MockBackend : public LlmBackend {
public:
    explicit MockBackend(MockScript script) : script_(std::move(script)) {}
    std::string complete(const ChatRequest& request) override;

private:
    MockScript script_;
};

struct HttpBackendConfig {
    std::string base_url;             // e.g. http://host:port/v1
    std::string api_key;              // from ERAGENT_API_KEY when empty
    int max_attempts = 3;
    int initial_delay_ms = 500;
    int backoff_factor = 2;
    int timeout_seconds = 60;
};

/// POST {base_url}/chat/completions; reads choices[0].message.content.
class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpBackendConfig cfg);
    std::string complete(const ChatRequest& request) override;

private:
    HttpBackendConfig cfg_;
};

/// Extracts the first balanced JSON object embedded in free text and checks
/// that every schema field is present. Throws UnparseableOutput /
/// SchemaViolation.
nlohmann::json parse_structured(const std::string& text, const std::vector<std::string>& schema);

/// Uniform model-call surface: owns the backend, counts calls per purpose
/// (for ablation assertions), caps in-flight requests, and implements the
/// one-re-ask policy for structured output.
class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<LlmBackend> backend, std::size_t max_in_flight = 4);

    std::string complete(const ChatRequest& request);
    std::string complete(const std::string& prompt, const std::string& purpose = "generic");

    /// Completes the prompt and parses a JSON object with the given fields.
    /// On a parse failure, re-asks once with a "respond with JSON only"
    /// message appended, then throws.
    nlohmann::json complete_structured(const std::string& prompt,
                                       const std::vector<std::string>& schema,
                                       const std::string& purpose = "generic");

    std::size_t call_count(const std::string& purpose) const;
    std::size_t total_calls() const;
    void reset_counters();

    /// Requests captured since construction (prompt text + temperature),
    /// for test assertions.
    std::vector<ChatRequest> captured_requests() const;

    double default_temperature = 0.0;
    int default_max_tokens = 1024;
    std::string model_id = "gpt-3.5-turbo";

private:
    std::string do_complete(const ChatRequest& request, const std::string& purpose);

    std::shared_ptr<LlmBackend> backend_;
    std::size_t max_in_flight_;
    mutable std::mutex mu_;
    std::size_t in_flight_ = 0;
    std::map<std::string, std::size_t> counts_;
    std::vector<ChatRequest> captured_;
};

}  // namespace eragent
