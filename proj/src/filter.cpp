#include "eragent/filter.hpp"

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/templates.hpp"
#include "eragent/util.hpp"

namespace eragent {

std::string to_string(NliLabel label) {
    switch (label) {
        case NliLabel::entailment: return "entailment";
        case NliLabel::contradiction: return "contradiction";
        case NliLabel::neutral: return "neutral";
    }
    return "neutral";
}

NliLabel parse_nli_label(const std::string& text) {
    const std::string s = util::to_lower(util::trim(text));
    if (s == "entailment") return NliLabel::entailment;
    if (s == "contradiction") return NliLabel::contradiction;
    return NliLabel::neutral;
}

NliVerdict KnowledgeFilter::classify_nli(const std::string& question, const KnowledgeChunk& chunk,
                                         std::vector<std::string>* warnings) const {
    NliVerdict verdict;
    verdict.chunk_id = chunk.id;
    const std::string prompt = templates::nli_filter().render(
        {{"premise", chunk.text}, {"question", question}});
    try {
        auto doc = gateway_.complete_structured(prompt, {"label"}, "filter");
        verdict.label = parse_nli_label(doc.at("label").get<std::string>());
        if (doc.contains("rationale") && doc["rationale"].is_string()) {
            verdict.rationale = doc["rationale"].get<std::string>();
        }
    } catch (const Error& e) {
        // Filter failure must not kill the pipeline; neutral drops the chunk.
        verdict.label = NliLabel::neutral;
        if (warnings) {
            warnings->push_back("nli classification failed for chunk " + chunk.id + ": " +
                                e.what());
        }
    }
    return verdict;
}

FilteredKnowledge KnowledgeFilter::filter_knowledge(
    const std::string& question, const std::vector<KnowledgeChunk>& chunks) const {
    FilteredKnowledge out;
    for (const auto& chunk : chunks) {
        const NliVerdict verdict = classify_nli(question, chunk, &out.warnings);
        if (verdict.label == NliLabel::entailment) {
            out.kept.push_back(chunk);
        } else {
            out.dropped.emplace_back(chunk.id, verdict.label);
        }
    }
    out.backoff = out.kept.empty();
    return out;
}

}  // namespace eragent
