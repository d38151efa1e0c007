#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eragent/embedder.hpp"
#include "eragent/filter.hpp"
#include "eragent/learner.hpp"
#include "eragent/llm_gateway.hpp"
#include "eragent/memory.hpp"
#include "eragent/profile.hpp"
#include "eragent/reader.hpp"
#include "eragent/retriever.hpp"
#include "eragent/rewriter.hpp"
#include "eragent/trigger.hpp"

namespace eragent {

/// Stage switches for the baseline ablations. Disabling the rewriter forces
/// queries=[original]; disabling the trigger retrieves for every query;
/// disabling the filter keeps every chunk.
struct PipelineComponents {
    bool rewriter = true;
    bool single_rewrite = false;  // traditional one-query rewriter baseline
    bool trigger = true;
    bool filter = true;
};

/// Wiring for a named baseline setting: standard, rewriter, rewriter_plus,
/// filter, or rewriter_plus_filter. All settings disable the trigger (the
/// one-round protocol uses no memory). Throws ConfigError on unknown names.
PipelineComponents setting_components(const std::string& setting);

struct PipelineConfig {
    TriggerConfig trigger;
    RetrieverConfig retriever;
    ReaderStyle reader_style = ReaderStyle::basic;
    PipelineComponents components;
    int max_queries = 4;
    bool retrieve_rewritten = false;  // adds the rewritten question as query 0
    std::optional<TerminologyDictionary> term_dict;
};

/// Per-question record of timing and knowledge counters.
struct RoundTrace {
    int round_index = 0;
    std::string original_question;
    std::string rewritten_question;
    std::vector<std::string> queries;
    std::vector<BoundaryDecision> boundary_decisions;
    int external_knowledge_count = 0;
    int memory_knowledge_count = 0;
    int irrelevant_knowledge_count = 0;
    bool backoff = false;
    long long elapsed_ms = 0;
    AnswerRecord answer;
    std::vector<std::string> warnings;
    bool failed = false;
};

nlohmann::json trace_to_json(const RoundTrace& trace, bool include_elapsed = true);
void write_traces_jsonl(const std::vector<RoundTrace>& traces, const std::string& path);

/// External retrieval hook: query -> ranked chunks. Backed by a local BM25
/// index or a web search provider.
using ExternalRetrieval = std::function<std::vector<KnowledgeChunk>(const std::string&)>;

class Pipeline {
public:
    Pipeline(LlmGateway& gateway, const Embedder& embedder, ExternalRetrieval retrieval,
             PipelineConfig cfg);

    /// One full round: rewrite, gate each query, retrieve or recall, filter,
    /// read, learn. Throws ReaderFailed; rewrite and retrieval failures
    /// degrade as specified per stage.
    std::pair<AnswerRecord, RoundTrace> answer_question(const std::string& question,
                                                        MemoryStore& memory,
                                                        const UserProfile& profile,
                                                        const std::string& session_id = "s0",
                                                        int round_index = 0) const;

    struct SessionResult {
        SessionTranscript transcript;
        std::vector<RoundTrace> traces;
        UserProfile profile;
    };

    /// Answers each question in order, threading the growing memory store;
    /// a failed round records an error trace and the session continues.
    /// The profile is updated once, at session end.
    SessionResult run_session(const std::vector<std::string>& questions, MemoryStore& memory,
                              const UserProfile& profile,
                              const std::string& session_id = "s0") const;

    const PipelineConfig& config() const { return cfg_; }

private:
    LlmGateway& gateway_;
    const Embedder& embedder_;
    ExternalRetrieval retrieval_;
    PipelineConfig cfg_;
    Rewriter make_rewriter() const;
};

}  // namespace eragent
