#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eragent/llm_gateway.hpp"
#include "eragent/pipeline.hpp"
#include "eragent/profile.hpp"

namespace eragent::eval {

struct QaItem {
    std::string id;
    std::string question;
    std::vector<std::string> gold_answers;  // non-empty
};

struct MetricReport {
    double em = 0.0;         // all values are percentages in [0,100]
    double precision = 0.0;
    double recall = 0.0;
    double hit_rate = 0.0;
    std::size_t n = 0;
};

/// Lowercase, drop articles a/an/the as whole words, remove punctuation,
/// collapse whitespace.
std::string normalize_answer(const std::string& text);

/// 1 iff the normalized prediction equals some normalized gold.
int em(const std::string& pred, const std::vector<std::string>& golds);

/// Bag-of-tokens precision/recall against the gold maximizing F1.
std::pair<double, double> token_prf(const std::string& pred,
                                    const std::vector<std::string>& golds);

/// 1 iff some normalized gold is a contiguous substring of the normalized
/// prediction.
int hit_rate(const std::string& pred, const std::vector<std::string>& golds);

/// Means x 100. Asserts the per-report consistency law hit_rate >= em.
/// Throws EmptyEvaluation.
MetricReport aggregate(const std::vector<std::pair<std::string, std::vector<std::string>>>& items);

enum class DatasetFormat { qa_jsonl, msmtqa_json };

struct SampleSpec {
    std::size_t n = 0;
    unsigned seed = 0;
};

/// QA JSONL: {"id","question","answers":[...]} per line. MSMTQA JSON turns
/// each round into an item with the assistant turn as gold. Sampling is
/// without replacement, deterministic in the seed, in draw order.
std::vector<QaItem> load_dataset(const std::string& path, DatasetFormat format,
                                 std::optional<SampleSpec> sample = std::nullopt);

enum class JudgeOutcome { win, loss, tie };  // for B vs A
enum class JudgeMode { with_personalization, without_personalization };

struct JudgeVerdict {
    JudgeOutcome outcome = JudgeOutcome::tie;
    JudgeMode mode = JudgeMode::without_personalization;
};

struct JudgeOptions {
    JudgeMode mode = JudgeMode::without_personalization;
    /// Single-pass mode skips the order-swapped second comparison.
    bool double_pass = true;
};

/// Pairwise LLM judgment of answer B against answer A. With double_pass the
/// comparison runs twice with A/B swapped; disagreement yields tie.
/// Throws JudgeUnavailable on backend failure.
JudgeVerdict judge_pairwise(LlmGateway& gateway, const std::string& question,
                            const std::string& answer_a, const std::string& answer_b,
                            const std::optional<UserProfile>& profile, JudgeOptions opts);

struct PersonaSpec {
    int persona_id = 0;  // 1..12
    std::vector<std::string> topics;
    /// Weights over {interest, disinterest, neutrality}.
    std::array<double, 3> attitude_policy{0.5, 0.2, 0.3};
};

/// The thirteen default conversation themes (editable via config).
std::vector<std::string> default_themes();
std::vector<PersonaSpec> default_personas();

struct MsmtqaRound {
    std::string user;
    std::string assistant;
    Attitude attitude = Attitude::neutrality;
};

struct MsmtqaSession {
    std::string session_id;
    std::string theme;
    std::vector<MsmtqaRound> rounds;
};

struct MsmtqaUser {
    int persona_id = 0;
    std::vector<MsmtqaSession> sessions;
};

struct MsmtqaCorpus {
    std::vector<MsmtqaUser> users;

    std::string to_json() const;
    static MsmtqaCorpus from_json(const std::string& text);
};

struct MsmtqaOptions {
    int sessions_per_user = 2;
    int rounds_per_session = 3;
    unsigned topic_seed = 0;
    /// When set, completed sessions are persisted here after each session
    /// and existing sessions are reused on rerun.
    std::string resume_path;
};

/// Seeded theme/attitude schedule per session, completed via the gateway.
MsmtqaCorpus generate_msmtqa(LlmGateway& gateway, const std::vector<PersonaSpec>& personas,
                             const MsmtqaOptions& opts);

struct EfficiencyReport {
    double mean_elapsed_ms = 0.0;
    double mean_external = 0.0;
    double mean_memory = 0.0;
    double mean_irrelevant = 0.0;
    std::optional<double> win_rate;   // percentages
    std::optional<double> loss_rate;
    std::optional<double> tie_rate;
};

EfficiencyReport efficiency_report(const std::vector<RoundTrace>& traces,
                                   const std::vector<JudgeVerdict>* verdicts = nullptr);

/// One table row in the accuracy-report layout:
/// Method, Dataset, EM, Precision, Recall, Hit Rate at two decimals.
struct ReportRow {
    std::string method;
    std::string dataset;
    MetricReport metrics;
};

std::string format_report_table(const std::vector<ReportRow>& rows);

}  // namespace eragent::eval
