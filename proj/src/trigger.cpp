#include "eragent/trigger.hpp"

#include <algorithm>

namespace eragent {

namespace {

struct Match {
    double sim;
    std::string id;
};

std::vector<Match> matches(const std::string& query, const MemoryStore& memory,
                           const TriggerConfig& cfg, const Embedder& embedder) {
    std::vector<Match> out;
    const auto query_vec = embedder.embed(query);
    for (const auto& record : memory.records()) {
        double sim = dot(query_vec, record.embedding);
        if (sim >= cfg.tau) out.push_back({sim, record.id});
    }
    return out;
}

}  // namespace

int popularity(const std::string& query, const MemoryStore& memory, const TriggerConfig& cfg,
               const Embedder& embedder) {
    return static_cast<int>(matches(query, memory, cfg, embedder).size());
}

BoundaryDecision classify(const std::string& query, const MemoryStore& memory,
                          const TriggerConfig& cfg, const Embedder& embedder) {
    auto ms = matches(query, memory, cfg, embedder);
    std::stable_sort(ms.begin(), ms.end(), [](const Match& a, const Match& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.id < b.id;
    });
    BoundaryDecision decision;
    decision.query = query;
    decision.popularity = static_cast<int>(ms.size());
    decision.inside = decision.popularity >= cfg.theta;
    for (auto& m : ms) decision.matched_records.push_back(std::move(m.id));
    return decision;
}

}  // namespace eragent
