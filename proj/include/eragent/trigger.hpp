#pragma once

#include <string>
#include <vector>

#include "eragent/embedder.hpp"
#include "eragent/memory.hpp"

namespace eragent {

struct TriggerConfig {
    double tau = 0.6;  // similarity threshold
    int theta = 3;     // popularity threshold
};

/// Per-query knowledge-boundary verdict.
struct BoundaryDecision {
    std::string query;
    int popularity = 0;
    bool inside = false;
    /// Record ids with similarity >= tau, descending by similarity,
    /// ties by ascending id.
    std::vector<std::string> matched_records;
};

/// Number of memory records whose snippet similarity to the query is >= tau.
int popularity(const std::string& query, const MemoryStore& memory, const TriggerConfig& cfg,
               const Embedder& embedder);

BoundaryDecision classify(const std::string& query, const MemoryStore& memory,
                          const TriggerConfig& cfg, const Embedder& embedder);

}  // namespace eragent
