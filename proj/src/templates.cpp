#include "eragent/templates.hpp"

namespace eragent::templates {

const PromptTemplate& rewriter() {
    static const PromptTemplate t(
        "rewriter",
        "You are a question rewriting assistant for a retrieval system.\n"
        "Rewrite the user's question into an explicit, standardized question, and\n"
        "generate fine-grained search queries, each targeting one semantic aspect\n"
        "of the question.\n\n"
        "Question: {question}\n\n"
        "Answer with a JSON object of the form\n"
        "{\"rewritten\": \"...\", \"queries\": [\"...\", \"...\"]}\n"
        "and nothing else.",
        {"question"});
    return t;
}

const PromptTemplate& nli_filter() {
    static const PromptTemplate t(
        "nli_filter",
        "Perform a natural language inference task.\n"
        "Premise:\n{premise}\n\n"
        "Hypothesis: The passage contains the information needed to answer: "
        "{question}\n\n"
        "Classify the relation of the premise to the hypothesis as one of\n"
        "entailment, contradiction, or neutral.\n"
        "Answer with a JSON object {\"label\": \"...\"} and nothing else.",
        {"premise", "question"});
    return t;
}

const PromptTemplate& reader_basic() {
    static const PromptTemplate t(
        "reader_basic",
        "Answer the question concisely and accurately.{context_section}\n\n"
        "Question: {question}\n"
        "Answer:",
        {"question", "context_section"});
    return t;
}

const PromptTemplate& reader_personalized() {
    static const PromptTemplate t(
        "reader_personalized",
        "Answer the question concisely and accurately, tailoring the response to\n"
        "the user described below.{context_section}\n\n"
        "User profile:\n{profile_section}\n\n"
        "Question: {question}\n"
        "Answer:",
        {"question", "context_section", "profile_section"});
    return t;
}

const PromptTemplate& snippet_summary() {
    static const PromptTemplate t(
        "snippet_summary",
        "Summarize the following passage in one short sentence of at most 200\n"
        "characters.\n\nPassage:\n{content}\n\nSummary:",
        {"content"});
    return t;
}

const PromptTemplate& profile_extraction() {
    static const PromptTemplate t(
        "profile_extraction",
        "Analyze the conversation transcript below and extract an incremental\n"
        "user profile with four facets:\n"
        "1. theme_preferences: topics with attitude interest, disinterest, or "
        "neutrality\n"
        "2. question_demands: the user's problem-solving intents\n"
        "3. basic_information: key/value facts such as employment or residence\n"
        "4. personalized_information: distinctive personal tags\n\n"
        "Transcript:\n{transcript}\n\n"
        "Answer with a JSON object of the form\n"
        "{\"theme_preferences\": [[\"topic\", \"attitude\"]], "
        "\"question_demands\": [\"...\"], "
        "\"basic_information\": [[\"key\", \"value\"]], "
        "\"personalized_information\": [\"...\"]}\n"
        "and nothing else. Use empty arrays for facets with no evidence.",
        {"transcript"});
    return t;
}

const PromptTemplate& pairwise_judge() {
    static const PromptTemplate t(
        "pairwise_judge",
        "You are an impartial judge comparing two assistant responses to the same\n"
        "question. Evaluate the aspects: {aspects}.\n{profile_section}\n"
        "Question: {question}\n\n"
        "Response A:\n{answer_a}\n\n"
        "Response B:\n{answer_b}\n\n"
        "Answer with a JSON object {\"winner\": \"A\"} or {\"winner\": \"B\"} or "
        "{\"winner\": \"tie\"} and nothing else.",
        {"aspects", "profile_section", "question", "answer_a", "answer_b"});
    return t;
}

const PromptTemplate& session_generation() {
    static const PromptTemplate t(
        "session_generation",
        "Generate a knowledge-intensive conversation between a user and an AI\n"
        "assistant about the theme \"{theme}\". Produce {rounds} rounds. In each\n"
        "round the user asks an open-domain question on the theme and the\n"
        "assistant answers it. The user's attitude per round is: {attitudes}\n"
        "(interest means engaged follow-ups, disinterest means dismissive\n"
        "replies, neutrality means non-committal replies).\n\n"
        "Answer with a JSON object of the form\n"
        "{\"rounds\": [{\"user\": \"...\", \"assistant\": \"...\"}]}\n"
        "and nothing else.",
        {"theme", "rounds", "attitudes"});
    return t;
}

}  // namespace eragent::templates
