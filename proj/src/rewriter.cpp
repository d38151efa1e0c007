#include "eragent/rewriter.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/templates.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

TerminologyDictionary TerminologyDictionary::load(const std::string& path) {
    json doc = json::parse(util::read_file(path));
    TerminologyDictionary dict;
    for (const auto& [surface, standard] : doc.items()) {
        if (surface.empty()) throw ConfigError("terminology dictionary has an empty key");
        if (surface == standard.get<std::string>()) continue;  // self-mapping is a no-op
        dict.entries[surface] = standard.get<std::string>();
    }
    return dict;
}

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool key_matches(const std::string& text, std::size_t pos, const std::string& key,
                 bool case_sensitive) {
    if (pos + key.size() > text.size()) return false;
    for (std::size_t i = 0; i < key.size(); ++i) {
        char a = text[pos + i];
        char b = key[i];
        if (!case_sensitive) {
            a = static_cast<char>(std::tolower(static_cast<unsigned char>(a)));
            b = static_cast<char>(std::tolower(static_cast<unsigned char>(b)));
        }
        if (a != b) return false;
    }
    // Word boundaries on both sides.
    if (pos > 0 && is_word_char(text[pos - 1]) && is_word_char(key.front())) return false;
    std::size_t end = pos + key.size();
    if (end < text.size() && is_word_char(text[end]) && is_word_char(key.back())) return false;
    return true;
}

}  // namespace

std::string apply_terminology(const std::string& original, const TerminologyDictionary& dict) {
    if (dict.entries.empty()) return original;
    // Longest keys first so the longest match wins at each position.
    std::vector<const std::pair<const std::string, std::string>*> keys;
    for (const auto& entry : dict.entries) keys.push_back(&entry);
    std::stable_sort(keys.begin(), keys.end(), [](const auto* a, const auto* b) {
        return a->first.size() > b->first.size();
    });
    std::string out;
    std::size_t pos = 0;
    while (pos < original.size()) {
        const std::pair<const std::string, std::string>* hit = nullptr;
        for (const auto* entry : keys) {
            if (key_matches(original, pos, entry->first, dict.case_sensitive)) {
                hit = entry;
                break;
            }
        }
        if (hit) {
            out += hit->second;
            pos += hit->first.size();
        } else {
            out.push_back(original[pos++]);
        }
    }
    return out;
}

RewriteResult Rewriter::rewrite(const std::string& original,
                                const std::optional<TerminologyDictionary>& dict) const {
    const std::string trimmed = util::trim(original);
    if (trimmed.empty()) throw InvalidQuestion("question is empty");
    const std::string normalized = dict ? apply_terminology(trimmed, *dict) : trimmed;

    const std::string prompt =
        templates::rewriter().render({{"question", normalized}});
    json doc;
    try {
        doc = gateway_.complete_structured(prompt, {"rewritten", "queries"}, "rewrite");
    } catch (const Error& e) {
        throw RewriteFailed(e.what());
    }

    RewriteResult result;
    result.rewritten = util::trim(doc.at("rewritten").get<std::string>());
    if (result.rewritten.empty()) throw RewriteFailed("model returned an empty rewrite");

    if (cfg_.single_rewrite) {
        result.queries = {result.rewritten};
        return result;
    }

    std::set<std::string> seen;
    for (const auto& q : doc.at("queries")) {
        if (!q.is_string()) continue;
        std::string query = util::trim(q.get<std::string>());
        if (query.empty()) continue;
        std::string key = util::normalize_text(query);
        if (!seen.insert(key).second) continue;
        result.queries.push_back(std::move(query));
        if (static_cast<int>(result.queries.size()) >= cfg_.max_queries) break;
    }
    if (result.queries.empty()) result.queries.push_back(result.rewritten);
    return result;
}

RewriteResult Rewriter::rewrite_or_fallback(
    const std::string& original, const std::optional<TerminologyDictionary>& dict) const {
    try {
        return rewrite(original, dict);
    } catch (const RewriteFailed&) {
        RewriteResult fallback;
        fallback.rewritten = util::trim(original);
        fallback.queries = {fallback.rewritten};
        return fallback;
    }
}

}  // namespace eragent
