#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eragent/filter.hpp"
#include "eragent/llm_gateway.hpp"
#include "eragent/profile.hpp"

namespace eragent {

enum class ReaderStyle { personalized, basic };

struct ReaderInput {
    std::string rewritten;
    FilteredKnowledge knowledge;
    std::optional<UserProfile> profile;  // required for personalized style
    ReaderStyle style = ReaderStyle::basic;
};

struct AnswerRecord {
    std::string text;
    std::vector<std::string> used_knowledge_ids;
    ReaderStyle style = ReaderStyle::basic;
};

class Reader {
public:
    explicit Reader(LlmGateway& gateway) : gateway_(gateway) {}

    /// Kept chunks become numbered context blocks in rank order. Under
    /// back-off the context section is omitted and the prompt asks for an
    /// answer from internal knowledge.
    static std::string assemble_prompt(const ReaderInput& input);

    /// Throws ReaderFailed when the backend cannot produce an answer.
    AnswerRecord answer(const ReaderInput& input) const;

private:
    LlmGateway& gateway_;
};

}  // namespace eragent
