#pragma once

#include "eragent/llm_gateway.hpp"

namespace eragent::templates {

/// Default prompt templates, one per LLM-backed task. Bodies instruct the
/// model to answer with a JSON object so outputs are machine-checkable.
const PromptTemplate& rewriter();
const PromptTemplate& nli_filter();
const PromptTemplate& reader_basic();
const PromptTemplate& reader_personalized();
const PromptTemplate& snippet_summary();
const PromptTemplate& profile_extraction();
const PromptTemplate& pairwise_judge();
const PromptTemplate& session_generation();

}  // namespace eragent::templates
