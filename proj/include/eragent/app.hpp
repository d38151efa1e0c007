#pragma once

#include <memory>

#include "eragent/config.hpp"
#include "eragent/embedder.hpp"
#include "eragent/llm_gateway.hpp"
#include "eragent/pipeline.hpp"
#include "eragent/retriever.hpp"

namespace eragent {

/// Wired-up backends for one process: gateway, embedder, and the external
/// retrieval hook selected by the config.
struct Runtime {
    AppConfig cfg;
    std::shared_ptr<LlmGateway> gateway;
    std::shared_ptr<Embedder> embedder;
    std::shared_ptr<Bm25Index> local_index;
    std::shared_ptr<SearchProvider> provider;

    ExternalRetrieval retrieval() const;
    Pipeline make_pipeline() const;
    Pipeline make_pipeline(const PipelineConfig& pcfg) const;
};

Runtime build_runtime(AppConfig cfg);

}  // namespace eragent
