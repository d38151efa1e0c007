#pragma once

#include <string>
#include <vector>

#include "eragent/embedder.hpp"
#include "eragent/llm_gateway.hpp"
#include "eragent/memory.hpp"
#include "eragent/profile.hpp"
#include "eragent/retriever.hpp"

namespace eragent {

struct SessionTurn {
    std::string question;
    std::string answer;
    int round_index = 0;
};

struct SessionTranscript {
    std::string session_id;
    std::vector<SessionTurn> turns;
};

/// Grows the memory knowledge base round-by-round and maintains the
/// four-facet user profile at session end.
class Learner {
public:
    Learner(LlmGateway& gateway, const Embedder& embedder)
        : gateway_(gateway), embedder_(embedder) {}

    /// LLM-backed summary capped at 200 characters. On backend failure the
    /// fallback is the first sentence, truncated to 200 characters.
    std::string summarize_snippet(const std::string& content) const;

    /// Appends kept external chunks as snippet-content records, skipping
    /// duplicate snippets. Memory-sourced chunks are already stored.
    /// Persists when the store has a path. Returns the number added.
    int update_memory(MemoryStore& store, const std::vector<KnowledgeChunk>& kept_chunks,
                      const std::string& session, int round) const;

    /// Extracts an incremental profile from the transcript and merges it:
    /// latest attitude wins per topic, lists dedup by normalized text, basic
    /// information merges by key with the incremental value winning. A parse
    /// failure leaves the profile unchanged apart from a warning.
    UserProfile update_profile(const UserProfile& profile, const SessionTranscript& transcript,
                               std::vector<std::string>* warnings = nullptr) const;

    /// Pure merge step, exposed for testing.
    static UserProfile merge_profiles(const UserProfile& existing, const UserProfile& incremental,
                                      const std::string& session_id);

    /// Deterministic fallback: first sentence truncated to 200 characters.
    static std::string first_sentence_truncated(const std::string& content);

private:
    LlmGateway& gateway_;
    const Embedder& embedder_;
};

}  // namespace eragent
