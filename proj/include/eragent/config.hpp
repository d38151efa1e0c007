#pragma once

#include <map>
#include <optional>
#include <string>

#include "eragent/pipeline.hpp"

namespace eragent {

enum class BackendKind { mock, http };
enum class SearchMode { local, replay, http };

/// Application configuration: backend settings, pipeline parameters, and
/// storage paths. Loaded from a key = value file; unknown keys are rejected.
struct AppConfig {
    BackendKind backend = BackendKind::mock;
    std::string mock_script_path;

    std::string llm_base_url;
    std::string llm_model = "gpt-3.5-turbo";
    int llm_max_tokens = 1024;
    double llm_temperature = 0.0;
    int llm_max_in_flight = 4;

    SearchMode search_mode = SearchMode::local;
    std::string corpus_path;    // local mode: JSONL corpus
    std::string fixture_dir;    // replay mode
    std::string search_url;     // http mode

    std::size_t embedder_dim = 4096;

    PipelineConfig pipeline;

    std::string memory_path;
    std::string profile_path;
    std::string trace_out;
    std::string term_dict_path;

    /// Applies one dotted key. Throws ConfigError for unknown keys or bad
    /// values.
    void set(const std::string& key, const std::string& value);
};

/// Parses a flat key = value file ('#' comments, blank lines allowed).
AppConfig load_config(const std::string& path);
AppConfig parse_config(const std::string& text);

}  // namespace eragent
