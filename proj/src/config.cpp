#include "eragent/config.hpp"

#include <sstream>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

namespace {

int to_int(const std::string& key, const std::string& value) {
    try {
        return std::stoi(value);
    } catch (...) {
        throw ConfigError("bad integer for " + key + ": " + value);
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        return std::stod(value);
    } catch (...) {
        throw ConfigError("bad number for " + key + ": " + value);
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    const std::string v = util::to_lower(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": " + value);
}

}  // namespace

void AppConfig::set(const std::string& key, const std::string& value) {
    if (key == "backend") {
        if (value == "mock") backend = BackendKind::mock;
        else if (value == "http") backend = BackendKind::http;
        else throw ConfigError("backend must be mock or http, got " + value);
    } else if (key == "mock_script") {
        mock_script_path = value;
    } else if (key == "llm.base_url") {
        llm_base_url = value;
    } else if (key == "llm.model") {
        llm_model = value;
    } else if (key == "llm.max_tokens") {
        llm_max_tokens = to_int(key, value);
    } else if (key == "llm.temperature") {
        llm_temperature = to_double(key, value);
    } else if (key == "llm.max_in_flight") {
        llm_max_in_flight = to_int(key, value);
    } else if (key == "search.mode") {
        if (value == "local") search_mode = SearchMode::local;
        else if (value == "replay") search_mode = SearchMode::replay;
        else if (value == "http") search_mode = SearchMode::http;
        else throw ConfigError("search.mode must be local, replay, or http");
    } else if (key == "search.corpus") {
        corpus_path = value;
    } else if (key == "search.fixtures") {
        fixture_dir = value;
    } else if (key == "search.url") {
        search_url = value;
    } else if (key == "search.lenient") {
        pipeline.retriever.lenient_fixture_miss = to_bool(key, value);
    } else if (key == "embedder.dim") {
        embedder_dim = static_cast<std::size_t>(to_int(key, value));
    } else if (key == "trigger.tau") {
        pipeline.trigger.tau = to_double(key, value);
        if (pipeline.trigger.tau < 0.0 || pipeline.trigger.tau > 1.0) {
            throw ConfigError("trigger.tau must be in [0,1]");
        }
    } else if (key == "trigger.theta") {
        pipeline.trigger.theta = to_int(key, value);
        if (pipeline.trigger.theta < 1) throw ConfigError("trigger.theta must be >= 1");
    } else if (key == "retriever.top_k") {
        pipeline.retriever.top_k = to_int(key, value);
    } else if (key == "retriever.chunk_size") {
        pipeline.retriever.chunk_size = to_int(key, value);
    } else if (key == "retriever.chunk_overlap") {
        pipeline.retriever.chunk_overlap = to_int(key, value);
    } else if (key == "retriever.k1") {
        pipeline.retriever.k1 = to_double(key, value);
    } else if (key == "retriever.b") {
        pipeline.retriever.b = to_double(key, value);
    } else if (key == "reader.style") {
        if (value == "basic") pipeline.reader_style = ReaderStyle::basic;
        else if (value == "personalized") pipeline.reader_style = ReaderStyle::personalized;
        else throw ConfigError("reader.style must be basic or personalized");
    } else if (key == "pipeline.max_queries") {
        pipeline.max_queries = to_int(key, value);
    } else if (key == "pipeline.retrieve_rewritten") {
        pipeline.retrieve_rewritten = to_bool(key, value);
    } else if (key == "paths.memory") {
        memory_path = value;
    } else if (key == "paths.profile") {
        profile_path = value;
    } else if (key == "paths.trace_out") {
        trace_out = value;
    } else if (key == "term_dict") {
        term_dict_path = value;
    } else {
        throw ConfigError("unknown config key: " + key);
    }
    if (pipeline.retriever.chunk_overlap >= pipeline.retriever.chunk_size) {
        throw ConfigError("retriever.chunk_overlap must be < retriever.chunk_size");
    }
}

AppConfig parse_config(const std::string& text) {
    AppConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = util::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        }
        cfg.set(util::trim(line.substr(0, eq)), util::trim(line.substr(eq + 1)));
    }
    return cfg;
}

AppConfig load_config(const std::string& path) {
    return parse_config(util::read_file(path));
}

}  // namespace eragent
