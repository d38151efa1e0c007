#include "eragent/pipeline.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

PipelineComponents setting_components(const std::string& setting) {
    PipelineComponents c;
    c.trigger = false;  // one-round protocol: no memory, no gating
    if (setting == "standard") {
        c.rewriter = false;
        c.filter = false;
    } else if (setting == "rewriter") {
        c.rewriter = true;
        c.single_rewrite = true;
        c.filter = false;
    } else if (setting == "rewriter_plus") {
        c.rewriter = true;
        c.filter = false;
    } else if (setting == "filter") {
        c.rewriter = false;
        c.filter = true;
    } else if (setting == "rewriter_plus_filter") {
        c.rewriter = true;
        c.filter = true;
    } else {
        throw ConfigError("unknown setting: " + setting);
    }
    return c;
}

json trace_to_json(const RoundTrace& trace, bool include_elapsed) {
    json doc;
    doc["round_index"] = trace.round_index;
    doc["original_question"] = trace.original_question;
    doc["rewritten_question"] = trace.rewritten_question;
    doc["queries"] = trace.queries;
    doc["boundary_decisions"] = json::array();
    for (const auto& d : trace.boundary_decisions) {
        doc["boundary_decisions"].push_back({{"query", d.query},
                                             {"popularity", d.popularity},
                                             {"inside", d.inside},
                                             {"matched_records", d.matched_records}});
    }
    doc["external_knowledge_count"] = trace.external_knowledge_count;
    doc["memory_knowledge_count"] = trace.memory_knowledge_count;
    doc["irrelevant_knowledge_count"] = trace.irrelevant_knowledge_count;
    doc["backoff"] = trace.backoff;
    if (include_elapsed) doc["elapsed_ms"] = trace.elapsed_ms;
    doc["answer"] = {{"text", trace.answer.text},
                     {"used_knowledge_ids", trace.answer.used_knowledge_ids},
                     {"style", trace.answer.style == ReaderStyle::personalized ? "personalized"
                                                                               : "basic"}};
    doc["warnings"] = trace.warnings;
    doc["failed"] = trace.failed;
    return doc;
}

void write_traces_jsonl(const std::vector<RoundTrace>& traces, const std::string& path) {
    std::ostringstream out;
    for (const auto& t : traces) out << trace_to_json(t).dump() << "\n";
    util::atomic_write(path, out.str());
}

Pipeline::Pipeline(LlmGateway& gateway, const Embedder& embedder, ExternalRetrieval retrieval,
                   PipelineConfig cfg)
    : gateway_(gateway), embedder_(embedder), retrieval_(std::move(retrieval)),
      cfg_(std::move(cfg)) {}

Rewriter Pipeline::make_rewriter() const {
    RewriterConfig rcfg;
    rcfg.max_queries = cfg_.max_queries;
    rcfg.single_rewrite = cfg_.components.single_rewrite;
    return Rewriter(gateway_, rcfg);
}

std::pair<AnswerRecord, RoundTrace> Pipeline::answer_question(const std::string& question,
                                                              MemoryStore& memory,
                                                              const UserProfile& profile,
                                                              const std::string& session_id,
                                                              int round_index) const {
    const auto started = std::chrono::steady_clock::now();
    if (util::trim(question).empty()) throw InvalidQuestion("question is empty");

    RoundTrace trace;
    trace.round_index = round_index;
    trace.original_question = question;

    // Rewrite (or pass the original through when the stage is disabled).
    RewriteResult rewrite;
    if (cfg_.components.rewriter) {
        rewrite = make_rewriter().rewrite_or_fallback(question, cfg_.term_dict);
    } else {
        rewrite.rewritten = util::trim(question);
        rewrite.queries = {rewrite.rewritten};
    }
    if (cfg_.retrieve_rewritten && cfg_.components.rewriter &&
        !cfg_.components.single_rewrite) {
        const std::string key = util::normalize_text(rewrite.rewritten);
        bool present = false;
        for (const auto& q : rewrite.queries) {
            if (util::normalize_text(q) == key) present = true;
        }
        if (!present) rewrite.queries.insert(rewrite.queries.begin(), rewrite.rewritten);
    }
    trace.rewritten_question = rewrite.rewritten;
    trace.queries = rewrite.queries;

    // Gate each query, then retrieve or recall. Chunk merge order is
    // query-major then rank; dedup by normalized text.
    std::vector<KnowledgeChunk> merged;
    std::set<std::string> seen_text;
    auto snapshot = memory.records();
    for (const auto& query : rewrite.queries) {
        BoundaryDecision decision;
        if (cfg_.components.trigger) {
            decision = classify(query, memory, cfg_.trigger, embedder_);
        } else {
            decision.query = query;
            decision.inside = false;
        }
        trace.boundary_decisions.push_back(decision);

        std::vector<KnowledgeChunk> chunks;
        if (decision.inside) {
            const auto query_vec = embedder_.embed(query);
            int taken = 0;
            for (const auto& id : decision.matched_records) {
                if (taken >= cfg_.retriever.top_k) break;
                for (const auto& record : snapshot) {
                    if (record.id != id) continue;
                    KnowledgeChunk c;
                    c.id = record.id;
                    c.text = record.content;
                    c.source = ChunkSource::memory;
                    c.origin = record.id;
                    c.score = dot(query_vec, record.embedding);
                    c.query = query;
                    chunks.push_back(std::move(c));
                    ++taken;
                    break;
                }
            }
        } else {
            try {
                chunks = retrieval_(query);
            } catch (const EmptyRetrieval& e) {
                trace.warnings.push_back(e.what());
            } catch (const SearchUnavailable& e) {
                trace.warnings.push_back(e.what());
            }
        }
        for (auto& chunk : chunks) {
            if (seen_text.insert(util::normalize_text(chunk.text)).second) {
                merged.push_back(std::move(chunk));
            }
        }
    }
    for (const auto& chunk : merged) {
        if (chunk.source == ChunkSource::external) {
            ++trace.external_knowledge_count;
        } else {
            ++trace.memory_knowledge_count;
        }
    }

    // Filter against the rewritten question.
    FilteredKnowledge filtered;
    if (cfg_.components.filter) {
        filtered = KnowledgeFilter(gateway_).filter_knowledge(rewrite.rewritten, merged);
    } else {
        filtered.kept = merged;
        filtered.backoff = filtered.kept.empty();
    }
    trace.irrelevant_knowledge_count = static_cast<int>(filtered.dropped.size());
    trace.backoff = filtered.backoff;
    for (const auto& w : filtered.warnings) trace.warnings.push_back(w);

    // Read.
    ReaderInput input;
    input.rewritten = rewrite.rewritten;
    input.knowledge = filtered;
    input.style = cfg_.reader_style;
    if (cfg_.reader_style == ReaderStyle::personalized) input.profile = profile;
    AnswerRecord answer = Reader(gateway_).answer(input);
    trace.answer = answer;

    // Learn: kept external chunks enter memory.
    Learner(gateway_, embedder_).update_memory(memory, filtered.kept, session_id, round_index);

    trace.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    return {answer, trace};
}

Pipeline::SessionResult Pipeline::run_session(const std::vector<std::string>& questions,
                                              MemoryStore& memory, const UserProfile& profile,
                                              const std::string& session_id) const {
    SessionResult result;
    result.transcript.session_id = session_id;
    int round = 0;
    for (const auto& question : questions) {
        try {
            auto [answer, trace] = answer_question(question, memory, profile, session_id, round);
            result.transcript.turns.push_back({question, answer.text, round});
            result.traces.push_back(std::move(trace));
        } catch (const Error& e) {
            RoundTrace trace;
            trace.round_index = round;
            trace.original_question = question;
            trace.failed = true;
            trace.warnings.push_back(e.what());
            result.traces.push_back(std::move(trace));
        }
        ++round;
    }
    if (!result.transcript.turns.empty()) {
        result.profile = Learner(gateway_, embedder_)
                             .update_profile(profile, result.transcript);
    } else {
        result.profile = profile;
    }
    return result;
}

}  // namespace eragent
