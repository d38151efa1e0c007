#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eragent/llm_gateway.hpp"

namespace eragent {

/// Surface form -> standard term substitutions, applied longest-match first
/// at word boundaries.
struct TerminologyDictionary {
    std::map<std::string, std::string> entries;
    bool case_sensitive = true;

    static TerminologyDictionary load(const std::string& path);
};

struct RewriteResult {
    std::string rewritten;
    std::vector<std::string> queries;  // ordered, pairwise distinct
};

/// Replaces every longest-match dictionary key bounded by non-word characters;
/// deterministic left-to-right scan, non-overlapping.
std::string apply_terminology(const std::string& original, const TerminologyDictionary& dict);

struct RewriterConfig {
    int max_queries = 4;
    /// Single-rewrite mode: the traditional rewriter baseline. The rewritten
    /// question is the only query; no fan-out.
    bool single_rewrite = false;
};

class Rewriter {
public:
    Rewriter(LlmGateway& gateway, RewriterConfig cfg = {}) : gateway_(gateway), cfg_(cfg) {}

    /// Throws InvalidQuestion for an empty question and RewriteFailed when
    /// the model output stays unparseable after one re-ask.
    RewriteResult rewrite(const std::string& original,
                          const std::optional<TerminologyDictionary>& dict = std::nullopt) const;

    /// rewrite() with the fallback applied: on RewriteFailed the original
    /// question serves as both the rewritten question and the sole query.
    RewriteResult rewrite_or_fallback(
        const std::string& original,
        const std::optional<TerminologyDictionary>& dict = std::nullopt) const;

private:
    LlmGateway& gateway_;
    RewriterConfig cfg_;
};

}  // namespace eragent
