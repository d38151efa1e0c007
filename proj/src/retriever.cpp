#include "eragent/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

std::vector<std::string> chunk_document(const std::string& text, const RetrieverConfig& cfg) {
    const auto tokens = util::tokenize(text);
    std::vector<std::string> chunks;
    if (tokens.empty()) return chunks;
    const std::size_t size = static_cast<std::size_t>(cfg.chunk_size);
    const std::size_t stride = static_cast<std::size_t>(cfg.chunk_size - cfg.chunk_overlap);
    for (std::size_t start = 0; start < tokens.size(); start += stride) {
        std::size_t end = std::min(start + size, tokens.size());
        std::string chunk;
        for (std::size_t i = start; i < end; ++i) {
            if (!chunk.empty()) chunk.push_back(' ');
            chunk += tokens[i];
        }
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

double bm25_score(const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& doc_terms, const CorpusStats& stats,
                  const RetrieverConfig& cfg) {
    std::map<std::string, int> tf;
    for (const auto& t : doc_terms) ++tf[t];
    const double doc_len = static_cast<double>(doc_terms.size());
    const double avgdl = stats.avg_doc_len > 0 ? stats.avg_doc_len : 1.0;
    double score = 0.0;
    for (const auto& term : query_terms) {
        auto it = tf.find(term);
        if (it == tf.end()) continue;
        auto df_it = stats.doc_freq.find(term);
        const double df = df_it == stats.doc_freq.end() ? 0.0 : df_it->second;
        const double n = stats.doc_count;
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        const double freq = it->second;
        score += idf * freq * (cfg.k1 + 1.0) /
                 (freq + cfg.k1 * (1.0 - cfg.b + cfg.b * doc_len / avgdl));
    }
    return score;
}

void Bm25Index::build(std::vector<Entry> entries, const RetrieverConfig& cfg) {
    entries_ = std::move(entries);
    cfg_ = cfg;
    entry_terms_.clear();
    stats_ = CorpusStats{};
    stats_.doc_count = static_cast<int>(entries_.size());
    std::size_t total_len = 0;
    for (const auto& e : entries_) {
        auto terms = util::tokenize(e.text);
        total_len += terms.size();
        std::set<std::string> uniq(terms.begin(), terms.end());
        for (const auto& t : uniq) ++stats_.doc_freq[t];
        entry_terms_.push_back(std::move(terms));
    }
    stats_.avg_doc_len =
        entries_.empty() ? 0.0 : static_cast<double>(total_len) / entries_.size();
    built_ = true;
}

std::vector<KnowledgeChunk> Bm25Index::search(const std::string& query,
                                              const RetrieverConfig& cfg) const {
    if (!built_) throw IndexMissing();
    const auto query_terms = util::tokenize(query);
    std::vector<KnowledgeChunk> scored;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        double s = bm25_score(query_terms, entry_terms_[i], stats_, cfg_);
        if (s <= 0.0) continue;
        KnowledgeChunk c;
        c.id = entries_[i].id;
        c.text = entries_[i].text;
        c.source = ChunkSource::external;
        c.origin = entries_[i].origin;
        c.score = s;
        c.query = query;
        scored.push_back(std::move(c));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const KnowledgeChunk& a, const KnowledgeChunk& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.id < b.id;
                     });
    if (scored.size() > static_cast<std::size_t>(cfg.top_k)) {
        scored.resize(static_cast<std::size_t>(cfg.top_k));
    }
    return scored;
}

Bm25Index index_local_corpus(const std::string& jsonl_path, const RetrieverConfig& cfg) {
    std::ifstream in(jsonl_path);
    if (!in) throw DatasetMalformed("cannot open corpus: " + jsonl_path);
    std::vector<Bm25Index::Entry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (util::trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) {
            throw DatasetMalformed("bad corpus line " + std::to_string(lineno));
        }
        const std::string doc_id = doc.at("id").get<std::string>();
        const std::string title = doc.value("title", "");
        const std::string text = doc.at("text").get<std::string>();
        const auto chunks = chunk_document(title.empty() ? text : title + " " + text, cfg);
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            entries.push_back({doc_id + "#" + std::to_string(i), doc_id, chunks[i]});
        }
    }
    Bm25Index index;
    index.build(std::move(entries), cfg);
    return index;
}

// ---------------------------------------------------------------------------
// Search providers

HttpSearchProvider::HttpSearchProvider(std::string search_url, std::string api_key)
    : search_url_(std::move(search_url)), api_key_(std::move(api_key)) {
    if (api_key_.empty()) {
        if (const char* key = std::getenv("ERAGENT_SEARCH_KEY")) api_key_ = key;
    }
}

namespace {

std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string url_encode(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", c);
            out += buf;
        }
    }
    return out;
}

}  // namespace

std::vector<SearchResult> HttpSearchProvider::search(const std::string& query, int count) {
    auto [host, path] = split_url(search_url_);
    httplib::Client client(host);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Ocp-Apim-Subscription-Key", api_key_);
    std::string sep = path.find('?') == std::string::npos ? "?" : "&";
    auto res = client.Get(path + sep + "q=" + url_encode(query) + "&count=" +
                              std::to_string(count),
                          headers);
    if (!res || res->status < 200 || res->status >= 300) {
        throw SearchUnavailable("search endpoint unreachable: " + search_url_);
    }
    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw SearchUnavailable("unparseable search response");
    std::vector<SearchResult> results;
    for (const auto& item : doc.value("results", json::array())) {
        results.push_back({item.value("title", ""), item.value("url", ""),
                           item.value("snippet", "")});
    }
    return results;
}

std::optional<std::string> HttpSearchProvider::fetch_page(const std::string& url) {
    auto [host, path] = split_url(url);
    httplib::Client client(host);
    auto res = client.Get(path);
    if (!res || res->status < 200 || res->status >= 300) return std::nullopt;
    return res->body;
}

ReplaySearchProvider::ReplaySearchProvider(std::string fixture_dir) : dir_(std::move(fixture_dir)) {
    const std::string path = dir_ + "/queries.json";
    json doc = json::parse(util::read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("bad replay fixture: " + path);
    }
    for (const auto& [query, urls] : doc.items()) {
        queries_[query] = urls.get<std::vector<std::string>>();
    }
}

std::vector<SearchResult> ReplaySearchProvider::search(const std::string& query, int count) {
    auto it = queries_.find(query);
    if (it == queries_.end()) {
        throw SearchUnavailable("query not in replay fixtures: " + query);
    }
    std::vector<SearchResult> results;
    for (const auto& url : it->second) {
        if (static_cast<int>(results.size()) >= count) break;
        results.push_back({"", url, ""});
    }
    return results;
}

std::optional<std::string> ReplaySearchProvider::fetch_page(const std::string& url) {
    const std::string path = dir_ + "/pages/" + util::sha256_hex(url) + ".txt";
    if (!std::filesystem::exists(path)) return std::nullopt;
    return util::read_file(path);
}

std::string strip_html(const std::string& html) {
    std::string out;
    bool in_tag = false;
    for (char c : html) {
        if (c == '<') {
            in_tag = true;
            out.push_back(' ');
        } else if (c == '>') {
            in_tag = false;
        } else if (!in_tag) {
            out.push_back(c);
        }
    }
    return util::collapse_whitespace(out);
}

WebSearchOutcome search_web(const std::string& query, SearchProvider& provider,
                            const RetrieverConfig& cfg) {
    WebSearchOutcome outcome;
    std::vector<SearchResult> results;
    try {
        results = provider.search(query, cfg.top_k);
    } catch (const SearchUnavailable&) {
        if (cfg.lenient_fixture_miss) return outcome;
        throw;
    }
    std::vector<Bm25Index::Entry> entries;
    int fetched = 0;
    for (const auto& result : results) {
        auto body = provider.fetch_page(result.url);
        if (!body) {
            outcome.warnings.push_back("page fetch failed: " + result.url);
            continue;
        }
        ++fetched;
        const auto chunks = chunk_document(strip_html(*body), cfg);
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            entries.push_back({result.url + "#" + std::to_string(i), result.url, chunks[i]});
        }
    }
    if (!results.empty() && fetched == 0) {
        throw EmptyRetrieval("all result pages failed to fetch for query: " + query);
    }
    Bm25Index index;
    index.build(std::move(entries), cfg);
    outcome.chunks = index.search(query, cfg);
    return outcome;
}

}  // namespace eragent
