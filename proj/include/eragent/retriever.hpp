#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eragent {

enum class ChunkSource { external, memory };

/// A retrieved or remembered text unit with provenance.
struct KnowledgeChunk {
    std::string id;
    std::string text;
    ChunkSource source = ChunkSource::external;
    std::string origin;  // URL, corpus doc id, or memory record id
    double score = 0.0;  // BM25 or similarity
    std::string query;   // the query that retrieved it
};

struct RetrieverConfig {
    int top_k = 5;
    int chunk_size = 256;     // tokens
    int chunk_overlap = 64;   // tokens
    double k1 = 1.5;
    double b = 0.75;
    bool lenient_fixture_miss = false;  // replay mode: missing query -> empty list
};

struct CorpusStats {
    int doc_count = 0;
    double avg_doc_len = 0.0;  // tokens
    std::map<std::string, int> doc_freq;
};

/// Sliding token windows of chunk_size with stride chunk_size - chunk_overlap;
/// the last partial window is kept when non-empty.
std::vector<std::string> chunk_document(const std::string& text, const RetrieverConfig& cfg);

/// Okapi BM25 with Lucene-style +1 IDF smoothing:
///   IDF(t) = ln((N - df + 0.5) / (df + 0.5) + 1)
///   score  = sum_t IDF(t) * tf*(k1+1) / (tf + k1*(1 - b + b*|d|/avgdl))
double bm25_score(const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& doc_terms, const CorpusStats& stats,
                  const RetrieverConfig& cfg);

/// BM25 index over a fixed set of chunks.
class Bm25Index {
public:
    struct Entry {
        std::string id;
        std::string origin;
        std::string text;
    };

    void build(std::vector<Entry> entries, const RetrieverConfig& cfg);
    bool built() const { return built_; }
    const CorpusStats& stats() const { return stats_; }

    /// Top-k chunks by score, descending; ties by ascending id; zero-score
    /// chunks are dropped. Throws IndexMissing if build was not called.
    std::vector<KnowledgeChunk> search(const std::string& query, const RetrieverConfig& cfg) const;

private:
    std::vector<Entry> entries_;
    std::vector<std::vector<std::string>> entry_terms_;
    CorpusStats stats_;
    RetrieverConfig cfg_;
    bool built_ = false;
};

/// Loads a JSONL corpus ({"id","title","text"} per line), chunks each
/// document, and builds a BM25 index over the chunks.
Bm25Index index_local_corpus(const std::string& jsonl_path, const RetrieverConfig& cfg);

struct SearchResult {
    std::string title;
    std::string url;
    std::string snippet;
};

/// Web-search provider contract: query -> ranked results, url -> page body.
class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    virtual std::vector<SearchResult> search(const std::string& query, int count) = 0;
    /// Returns nullopt when the page cannot be fetched.
    virtual std::optional<std::string> fetch_page(const std::string& url) = 0;
};

/// GET {search_url}?q={query}&count={n}; credential from ERAGENT_SEARCH_KEY.
class HttpSearchProvider : public SearchProvider {
public:
    explicit HttpSearchProvider(std::string search_url, std::string api_key = "");
    std::vector<SearchResult> search(const std::string& query, int count) override;
    std::optional<std::string> fetch_page(const std::string& url) override;

private:
    std::string search_url_;
    std::string api_key_;
};

/// Hermetic replay provider: fixture directory with queries.json
/// ({query: [urls]}) and pages/{sha256(url)}.txt.
class ReplaySearchProvider : public SearchProvider {
public:
    explicit ReplaySearchProvider(std::string fixture_dir);
    std::vector<SearchResult> search(const std::string& query, int count) override;
    std::optional<std::string> fetch_page(const std::string& url) override;

private:
    std::string dir_;
    std::map<std::string, std::vector<std::string>> queries_;
};

/// Remove HTML tags and collapse whitespace.
std::string strip_html(const std::string& html);

struct WebSearchOutcome {
    std::vector<KnowledgeChunk> chunks;
    std::vector<std::string> warnings;
};

/// Searches, fetches result pages (skipping failures with a warning), chunks
/// them, and BM25-ranks the chunks against the query with statistics over the
/// fetched set. Throws SearchUnavailable / EmptyRetrieval.
WebSearchOutcome search_web(const std::string& query, SearchProvider& provider,
                            const RetrieverConfig& cfg);

}  // namespace eragent
