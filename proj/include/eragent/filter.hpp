#pragma once

#include <string>
#include <vector>

#include "eragent/llm_gateway.hpp"
#include "eragent/retriever.hpp"

namespace eragent {

enum class NliLabel { entailment, contradiction, neutral };

std::string to_string(NliLabel label);
/// Unknown label strings map to neutral.
NliLabel parse_nli_label(const std::string& text);

struct NliVerdict {
    NliLabel label = NliLabel::neutral;
    std::string chunk_id;
    std::string rationale;
};

struct FilteredKnowledge {
    std::vector<KnowledgeChunk> kept;  // entailment chunks, input order
    std::vector<std::pair<std::string, NliLabel>> dropped;
    bool backoff = false;  // true iff kept is empty
    std::vector<std::string> warnings;
};

class KnowledgeFilter {
public:
    explicit KnowledgeFilter(LlmGateway& gateway) : gateway_(gateway) {}

    /// One model call per chunk. A backend failure degrades the chunk to
    /// neutral with a warning instead of raising.
    NliVerdict classify_nli(const std::string& question, const KnowledgeChunk& chunk,
                            std::vector<std::string>* warnings = nullptr) const;

    FilteredKnowledge filter_knowledge(const std::string& question,
                                       const std::vector<KnowledgeChunk>& chunks) const;

private:
    LlmGateway& gateway_;
};

}  // namespace eragent
