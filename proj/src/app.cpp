#include "eragent/app.hpp"

#include "eragent/errors.hpp"

namespace eragent {

Runtime build_runtime(AppConfig cfg) {
    Runtime rt;

    std::shared_ptr<LlmBackend> backend;
    if (cfg.backend == BackendKind::mock) {
        MockScript script;
        if (!cfg.mock_script_path.empty()) script = MockScript::load(cfg.mock_script_path);
        backend = std::make_shared<MockBackend>(std::move(script));
    } else {
        if (cfg.llm_base_url.empty()) {
            throw ConfigError("http backend requires llm.base_url");
        }
        HttpBackendConfig hcfg;
        hcfg.base_url = cfg.llm_base_url;
        backend = std::make_shared<HttpBackend>(hcfg);
    }
    rt.gateway = std::make_shared<LlmGateway>(backend,
                                              static_cast<std::size_t>(cfg.llm_max_in_flight));
    rt.gateway->default_temperature = cfg.llm_temperature;
    rt.gateway->default_max_tokens = cfg.llm_max_tokens;
    rt.gateway->model_id = cfg.llm_model;

    rt.embedder = std::make_shared<LexicalEmbedder>(cfg.embedder_dim);

    if (cfg.search_mode == SearchMode::local) {
        if (!cfg.corpus_path.empty()) {
            rt.local_index = std::make_shared<Bm25Index>(
                index_local_corpus(cfg.corpus_path, cfg.pipeline.retriever));
        }
    } else if (cfg.search_mode == SearchMode::replay) {
        rt.provider = std::make_shared<ReplaySearchProvider>(cfg.fixture_dir);
    } else {
        if (cfg.search_url.empty()) throw ConfigError("http search requires search.url");
        rt.provider = std::make_shared<HttpSearchProvider>(cfg.search_url);
    }

    if (!cfg.term_dict_path.empty()) {
        cfg.pipeline.term_dict = TerminologyDictionary::load(cfg.term_dict_path);
    }

    rt.cfg = std::move(cfg);
    return rt;
}

ExternalRetrieval Runtime::retrieval() const {
    if (local_index) {
        auto index = local_index;
        auto rcfg = cfg.pipeline.retriever;
        return [index, rcfg](const std::string& query) { return index->search(query, rcfg); };
    }
    if (provider) {
        auto prov = provider;
        auto rcfg = cfg.pipeline.retriever;
        return [prov, rcfg](const std::string& query) {
            return search_web(query, *prov, rcfg).chunks;
        };
    }
    // No retrieval source configured: every query comes back empty.
    return [](const std::string&) { return std::vector<KnowledgeChunk>{}; };
}

Pipeline Runtime::make_pipeline() const { return make_pipeline(cfg.pipeline); }

Pipeline Runtime::make_pipeline(const PipelineConfig& pcfg) const {
    return Pipeline(*gateway, *embedder, retrieval(), pcfg);
}

}  // namespace eragent
