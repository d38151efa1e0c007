#include "eragent/llm_gateway.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

ChatRequest ChatRequest::single_user(std::string prompt) {
    ChatRequest req;
    req.messages.push_back({"user", std::move(prompt)});
    return req;
}

// ---------------------------------------------------------------------------
// PromptTemplate

PromptTemplate::PromptTemplate(std::string name, std::string body,
                               std::set<std::string> required_vars)
    : name_(std::move(name)), body_(std::move(body)), required_vars_(std::move(required_vars)) {}

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Returns the identifier inside {..} starting at pos, or nullopt if the
// brace pair is not a placeholder.
std::optional<std::string> placeholder_at(const std::string& body, std::size_t pos,
                                          std::size_t* end) {
    std::size_t i = pos + 1;
    std::string ident;
    while (i < body.size() && is_ident_char(body[i])) ident.push_back(body[i++]);
    if (ident.empty() || i >= body.size() || body[i] != '}') return std::nullopt;
    if (std::isdigit(static_cast<unsigned char>(ident[0]))) return std::nullopt;
    *end = i + 1;
    return ident;
}

}  // namespace

std::string PromptTemplate::render(const std::map<std::string, std::string>& vars) const {
    std::string out;
    out.reserve(body_.size());
    std::size_t i = 0;
    while (i < body_.size()) {
        if (body_[i] == '{') {
            std::size_t end = 0;
            if (auto ident = placeholder_at(body_, i, &end)) {
                auto it = vars.find(*ident);
                if (it != vars.end()) {
                    out += it->second;
                } else if (required_vars_.count(*ident)) {
                    throw MissingVariable(*ident);
                } else {
                    throw TemplateMalformed("template '" + name_ + "' has unknown placeholder {" +
                                            *ident + "}");
                }
                i = end;
                continue;
            }
        }
        out.push_back(body_[i++]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// MockScript

MockScript::MockScript(std::vector<Rule> rules, std::string default_response)
    : rules_(std::move(rules)), default_response_(std::move(default_response)) {}

MockScript MockScript::from_json(const json& doc) {
    std::vector<Rule> rules;
    std::string default_response = "UNKNOWN";
    if (!doc.is_array()) throw ConfigError("mock script must be a JSON array");
    for (const auto& entry : doc) {
        if (entry.contains("default")) {
            default_response = entry.at("default").get<std::string>();
            continue;
        }
        Rule r;
        r.match = entry.at("match").get<std::string>();
        r.response = entry.at("response").get<std::string>();
        r.is_regex = entry.value("regex", false);
        rules.push_back(std::move(r));
    }
    return MockScript(std::move(rules), std::move(default_response));
}

MockScript MockScript::load(const std::string& path) {
    return from_json(json::parse(util::read_file(path)));
}

const std::string& MockScript::respond(const std::string& prompt) const {
    for (const auto& rule : rules_) {
        if (rule.is_regex) {
            if (std::regex_search(prompt, std::regex(rule.match))) return rule.response;
        } else if (prompt.find(rule.match) != std::string::npos) {
            return rule.response;
        }
    }
    return default_response_;
}

std::string MockBackend::complete(const ChatRequest& request) {
    std::string prompt;
    for (const auto& m : request.messages) {
        if (!prompt.empty()) prompt += "\n";
        prompt += m.content;
    }
    return script_.respond(prompt);
}

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.api_key.empty()) {
        if (const char* key = std::getenv("ERAGENT_API_KEY")) cfg_.api_key = key;
    }
}

std::string HttpBackend::complete(const ChatRequest& request) {
    json body;
    body["model"] = request.model_id;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    body["messages"] = json::array();
    for (const auto& m : request.messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }

    // Split base_url into host part and path prefix.
    std::string url = cfg_.base_url;
    std::string host = url;
    std::string prefix;
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start != std::string::npos) {
        host = url.substr(0, path_start);
        prefix = url.substr(path_start);
        if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    }

    httplib::Client client(host);
    client.set_connection_timeout(cfg_.timeout_seconds);
    client.set_read_timeout(cfg_.timeout_seconds);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    int delay_ms = cfg_.initial_delay_ms;
    std::string last_error;
    for (int attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= cfg_.backoff_factor;
        }
        auto res = client.Post(prefix + "/chat/completions", headers, body.dump(),
                               "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;  // transport failure, retry
        }
        if (res->status < 200 || res->status >= 300) {
            // 5xx is treated as transient; 4xx is a hard rejection.
            if (res->status >= 500 && attempt + 1 < cfg_.max_attempts) {
                last_error = "status " + std::to_string(res->status);
                continue;
            }
            throw BackendRejected(res->status, res->body);
        }
        json doc = json::parse(res->body, nullptr, false);
        if (doc.is_discarded()) throw BackendRejected(res->status, "unparseable response body");
        std::string text = doc.value("choices", json::array())
                               .at(0)
                               .value("message", json::object())
                               .value("content", "");
        if (util::trim(text).empty()) throw EmptyCompletion();
        return text;
    }
    throw BackendUnavailable("chat completion failed after " +
                             std::to_string(cfg_.max_attempts) + " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// parse_structured

json parse_structured(const std::string& text, const std::vector<std::string>& schema) {
    if (schema.empty()) throw ConfigError("parse_structured requires a non-empty schema");
    std::size_t start = 0;
    while ((start = text.find('{', start)) != std::string::npos) {
        // Scan for the matching close brace, honoring strings and escapes.
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    json doc = json::parse(text.substr(start, i - start + 1), nullptr, false);
                    if (doc.is_object()) {
                        for (const auto& field : schema) {
                            if (!doc.contains(field)) throw SchemaViolation(field);
                        }
                        return doc;
                    }
                    break;  // balanced but invalid, try the next '{'
                }
            }
        }
        ++start;
    }
    throw UnparseableOutput("no JSON object found in model output");
}

// ---------------------------------------------------------------------------
// LlmGateway

LlmGateway::LlmGateway(std::shared_ptr<LlmBackend> backend, std::size_t max_in_flight)
    : backend_(std::move(backend)), max_in_flight_(max_in_flight == 0 ? 1 : max_in_flight) {}

std::string LlmGateway::do_complete(const ChatRequest& request, const std::string& purpose) {
    {
        std::unique_lock lock(mu_);
        ++counts_[purpose];
        captured_.push_back(request);
        // Simple in-flight cap: spin-wait under the lock is avoided by
        // releasing between checks.
        while (in_flight_ >= max_in_flight_) {
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::milliseconds(1));
            lock.lock();
        }
        ++in_flight_;
    }
    std::string text;
    try {
        text = backend_->complete(request);
    } catch (...) {
        std::lock_guard lock(mu_);
        --in_flight_;
        throw;
    }
    {
        std::lock_guard lock(mu_);
        --in_flight_;
    }
    if (util::trim(text).empty()) throw EmptyCompletion();
    return text;
}

std::string LlmGateway::complete(const ChatRequest& request) {
    return do_complete(request, "generic");
}

std::string LlmGateway::complete(const std::string& prompt, const std::string& purpose) {
    ChatRequest req = ChatRequest::single_user(prompt);
    req.temperature = default_temperature;
    req.max_tokens = default_max_tokens;
    req.model_id = model_id;
    return do_complete(req, purpose);
}

json LlmGateway::complete_structured(const std::string& prompt,
                                     const std::vector<std::string>& schema,
                                     const std::string& purpose) {
    std::string text = complete(prompt, purpose);
    try {
        return parse_structured(text, schema);
    } catch (const Error&) {
        // One re-ask with an explicit JSON-only instruction, then give up.
        ChatRequest req = ChatRequest::single_user(prompt);
        req.temperature = default_temperature;
        req.max_tokens = default_max_tokens;
        req.model_id = model_id;
        req.messages.push_back({"assistant", text});
        req.messages.push_back({"user", "Respond with JSON only."});
        std::string retry = do_complete(req, purpose);
        return parse_structured(retry, schema);
    }
}

std::size_t LlmGateway::call_count(const std::string& purpose) const {
    std::lock_guard lock(mu_);
    auto it = counts_.find(purpose);
    return it == counts_.end() ? 0 : it->second;
}

std::size_t LlmGateway::total_calls() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& [_, c] : counts_) n += c;
    return n;
}

void LlmGateway::reset_counters() {
    std::lock_guard lock(mu_);
    counts_.clear();
    captured_.clear();
}

std::vector<ChatRequest> LlmGateway::captured_requests() const {
    std::lock_guard lock(mu_);
    return captured_;
}

}  // namespace eragent
