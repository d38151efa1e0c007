#include "eragent/eval.hpp"

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/templates.hpp"
#include "eragent/util.hpp"

namespace eragent::eval {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Metrics

std::string normalize_answer(const std::string& text) {
    std::string lowered = util::to_lower(text);
    // Strip punctuation first so tokens like "it's" become "its".
    std::string no_punct;
    no_punct.reserve(lowered.size());
    for (unsigned char c : lowered) {
        if (std::isalnum(c) || std::isspace(c)) no_punct.push_back(static_cast<char>(c));
    }
    std::istringstream in(no_punct);
    std::string word;
    std::string out;
    while (in >> word) {
        if (word == "a" || word == "an" || word == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

int em(const std::string& pred, const std::vector<std::string>& golds) {
    const std::string p = normalize_answer(pred);
    for (const auto& g : golds) {
        if (p == normalize_answer(g)) return 1;
    }
    return 0;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::size_t multiset_overlap(const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : a) ++counts[t];
    std::size_t overlap = 0;
    for (const auto& t : b) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return overlap;
}

}  // namespace

std::pair<double, double> token_prf(const std::string& pred,
                                    const std::vector<std::string>& golds) {
    const auto pred_tokens = split_ws(normalize_answer(pred));
    if (pred_tokens.empty()) return {0.0, 0.0};
    double best_f1 = -1.0;
    std::pair<double, double> best{0.0, 0.0};
    for (const auto& gold : golds) {
        const auto gold_tokens = split_ws(normalize_answer(gold));
        if (gold_tokens.empty()) continue;
        const double overlap = static_cast<double>(multiset_overlap(pred_tokens, gold_tokens));
        const double p = overlap / static_cast<double>(pred_tokens.size());
        const double r = overlap / static_cast<double>(gold_tokens.size());
        const double f1 = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
        if (f1 > best_f1) {
            best_f1 = f1;
            best = {p, r};
        }
    }
    return best;
}

int hit_rate(const std::string& pred, const std::vector<std::string>& golds) {
    const std::string p = normalize_answer(pred);
    for (const auto& g : golds) {
        const std::string gn = normalize_answer(g);
        if (!gn.empty() && p.find(gn) != std::string::npos) return 1;
    }
    return 0;
}

MetricReport aggregate(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& items) {
    if (items.empty()) throw EmptyEvaluation();
    MetricReport report;
    report.n = items.size();
    double em_sum = 0, p_sum = 0, r_sum = 0, hit_sum = 0;
    for (const auto& [pred, golds] : items) {
        const int e = em(pred, golds);
        const int h = hit_rate(pred, golds);
        // Consistency law: an exact match is always a substring hit.
        if (h < e) throw Error("metric consistency violated: hit_rate < em for '" + pred + "'");
        const auto [p, r] = token_prf(pred, golds);
        em_sum += e;
        hit_sum += h;
        p_sum += p;
        r_sum += r;
    }
    const double n = static_cast<double>(items.size());
    report.em = 100.0 * em_sum / n;
    report.precision = 100.0 * p_sum / n;
    report.recall = 100.0 * r_sum / n;
    report.hit_rate = 100.0 * hit_sum / n;
    if (report.hit_rate < report.em) {
        throw Error("metric consistency violated in aggregate: hit_rate < em");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Datasets

namespace {

std::vector<QaItem> sample_items(std::vector<QaItem> items, const SampleSpec& spec) {
    if (spec.n > items.size()) {
        throw SampleTooLarge("requested " + std::to_string(spec.n) + " of " +
                             std::to_string(items.size()) + " items");
    }
    std::mt19937 rng(spec.seed);
    std::vector<QaItem> out;
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        // Raw engine output keeps the draw sequence identical across
        // platforms (std distributions are implementation-defined).
        const std::size_t j = static_cast<std::size_t>(rng()) % items.size();
        out.push_back(items[j]);
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(j));
    }
    return out;
}

}  // namespace

std::vector<QaItem> load_dataset(const std::string& path, DatasetFormat format,
                                 std::optional<SampleSpec> sample) {
    std::vector<QaItem> items;
    if (format == DatasetFormat::qa_jsonl) {
        std::ifstream in(path);
        if (!in) throw DatasetMalformed("cannot open dataset: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (util::trim(line).empty()) continue;
            json doc = json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) {
                throw DatasetMalformed("bad dataset line " + std::to_string(lineno));
            }
            QaItem item;
            item.id = doc.value("id", "line-" + std::to_string(lineno));
            item.question = doc.at("question").get<std::string>();
            item.gold_answers = doc.at("answers").get<std::vector<std::string>>();
            if (item.gold_answers.empty()) {
                throw DatasetMalformed("no gold answers at line " + std::to_string(lineno));
            }
            items.push_back(std::move(item));
        }
    } else {
        MsmtqaCorpus corpus = MsmtqaCorpus::from_json(util::read_file(path));
        for (const auto& user : corpus.users) {
            for (const auto& session : user.sessions) {
                int round = 0;
                for (const auto& r : session.rounds) {
                    QaItem item;
                    item.id = session.session_id + "#r" + std::to_string(round++);
                    item.question = r.user;
                    item.gold_answers = {r.assistant};
                    items.push_back(std::move(item));
                }
            }
        }
    }
    if (sample) return sample_items(std::move(items), *sample);
    return items;
}

// ---------------------------------------------------------------------------
// Pairwise judging

namespace {

/// One comparison pass: returns "a", "b", or "tie" for the presented order.
std::string judge_once(LlmGateway& gateway, const std::string& question,
                       const std::string& first, const std::string& second,
                       const std::optional<UserProfile>& profile, JudgeMode mode) {
    std::string aspects = "helpfulness, relevance, detailedness, consistency, and depth";
    std::string profile_section;
    if (mode == JudgeMode::with_personalization) {
        aspects += ", and alignment with the user's personalization";
        if (profile) {
            profile_section = "User profile:\n" + profile->serialize() + "\n";
        }
    }
    const std::string prompt = templates::pairwise_judge().render({{"aspects", aspects},
                                                                   {"profile_section",
                                                                    profile_section},
                                                                   {"question", question},
                                                                   {"answer_a", first},
                                                                   {"answer_b", second}});
    json doc = gateway.complete_structured(prompt, {"winner"}, "judge");
    std::string winner = util::to_lower(util::trim(doc.at("winner").get<std::string>()));
    if (winner != "a" && winner != "b") winner = "tie";
    return winner;
}

}  // namespace

JudgeVerdict judge_pairwise(LlmGateway& gateway, const std::string& question,
                            const std::string& answer_a, const std::string& answer_b,
                            const std::optional<UserProfile>& profile, JudgeOptions opts) {
    if (util::trim(answer_a).empty() || util::trim(answer_b).empty()) {
        throw InvalidText("judge_pairwise requires non-empty answers");
    }
    auto outcome_for_b = [](const std::string& winner, bool swapped) {
        if (winner == "tie") return JudgeOutcome::tie;
        const bool b_won = swapped ? (winner == "a") : (winner == "b");
        return b_won ? JudgeOutcome::win : JudgeOutcome::loss;
    };
    JudgeVerdict verdict;
    verdict.mode = opts.mode;
    try {
        const JudgeOutcome first =
            outcome_for_b(judge_once(gateway, question, answer_a, answer_b, profile, opts.mode),
                          false);
        if (!opts.double_pass) {
            verdict.outcome = first;
            return verdict;
        }
        const JudgeOutcome second =
            outcome_for_b(judge_once(gateway, question, answer_b, answer_a, profile, opts.mode),
                          true);
        verdict.outcome = (first == second) ? first : JudgeOutcome::tie;
        return verdict;
    } catch (const Error& e) {
        throw JudgeUnavailable(e.what());
    }
}

// ---------------------------------------------------------------------------
// MSMTQA generation

std::vector<std::string> default_themes() {
    // Editable defaults; any 13 theme names work.
    return {"Technology",  "Health and Fitness", "Travel",   "Food and Cooking",
            "Sports",      "Movies and TV",      "Music",    "Literature",
            "Science",     "History",            "Finance",  "Education",
            "Fashion"};
}

std::vector<PersonaSpec> default_personas() {
    const auto themes = default_themes();
    std::vector<PersonaSpec> personas;
    for (int i = 1; i <= 12; ++i) {
        PersonaSpec p;
        p.persona_id = i;
        p.topics = {themes[(i - 1) % themes.size()], themes[(i + 2) % themes.size()],
                    themes[(i + 6) % themes.size()]};
        p.attitude_policy = {0.4 + 0.02 * (i % 3), 0.2, 0.4 - 0.02 * (i % 3)};
        personas.push_back(std::move(p));
    }
    return personas;
}

std::string MsmtqaCorpus::to_json() const {
    json doc;
    doc["users"] = json::array();
    for (const auto& user : users) {
        json sessions = json::array();
        for (const auto& session : user.sessions) {
            json rounds = json::array();
            for (const auto& r : session.rounds) {
                rounds.push_back({{"user", r.user},
                                  {"assistant", r.assistant},
                                  {"attitude", to_string(r.attitude)}});
            }
            sessions.push_back({{"session_id", session.session_id},
                                {"theme", session.theme},
                                {"rounds", rounds}});
        }
        doc["users"].push_back({{"persona_id", user.persona_id}, {"sessions", sessions}});
    }
    return doc.dump(2);
}

MsmtqaCorpus MsmtqaCorpus::from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw DatasetMalformed("bad MSMTQA corpus JSON");
    }
    MsmtqaCorpus corpus;
    for (const auto& u : doc.value("users", json::array())) {
        MsmtqaUser user;
        user.persona_id = u.value("persona_id", 0);
        for (const auto& s : u.value("sessions", json::array())) {
            MsmtqaSession session;
            session.session_id = s.value("session_id", "");
            session.theme = s.value("theme", "");
            for (const auto& r : s.value("rounds", json::array())) {
                session.rounds.push_back({r.value("user", ""), r.value("assistant", ""),
                                          parse_attitude(r.value("attitude", "neutrality"))});
            }
            user.sessions.push_back(std::move(session));
        }
        corpus.users.push_back(std::move(user));
    }
    return corpus;
}

namespace {

double next_unit(std::mt19937& rng) {
    return static_cast<double>(rng()) / 4294967296.0;
}

Attitude draw_attitude(std::mt19937& rng, const std::array<double, 3>& policy) {
    double total = policy[0] + policy[1] + policy[2];
    if (total <= 0) return Attitude::neutrality;
    double u = next_unit(rng) * total;
    if (u < policy[0]) return Attitude::interest;
    if (u < policy[0] + policy[1]) return Attitude::disinterest;
    return Attitude::neutrality;
}

}  // namespace

MsmtqaCorpus generate_msmtqa(LlmGateway& gateway, const std::vector<PersonaSpec>& personas,
                             const MsmtqaOptions& opts) {
    if (personas.empty()) throw ConfigError("generate_msmtqa requires personas");
    MsmtqaCorpus corpus;
    MsmtqaCorpus resumed;
    if (!opts.resume_path.empty() && std::filesystem::exists(opts.resume_path)) {
        resumed = MsmtqaCorpus::from_json(util::read_file(opts.resume_path));
    }

    for (const auto& persona : personas) {
        MsmtqaUser user;
        user.persona_id = persona.persona_id;
        // Per-persona stream so one user's length never shifts another's
        // schedule.
        std::mt19937 rng(opts.topic_seed * 1000003u + static_cast<unsigned>(persona.persona_id));
        const MsmtqaUser* prior = nullptr;
        for (const auto& ru : resumed.users) {
            if (ru.persona_id == persona.persona_id) prior = &ru;
        }
        for (int s = 0; s < opts.sessions_per_user; ++s) {
            const std::string session_id =
                "u" + std::to_string(persona.persona_id) + "-s" + std::to_string(s);
            const std::string theme =
                persona.topics[static_cast<std::size_t>(rng()) % persona.topics.size()];
            std::vector<Attitude> attitudes;
            for (int r = 0; r < opts.rounds_per_session; ++r) {
                attitudes.push_back(draw_attitude(rng, persona.attitude_policy));
            }
            if (prior && s < static_cast<int>(prior->sessions.size()) &&
                prior->sessions[s].session_id == session_id) {
                user.sessions.push_back(prior->sessions[s]);
                continue;
            }

            std::string attitude_list;
            for (std::size_t i = 0; i < attitudes.size(); ++i) {
                if (i) attitude_list += ", ";
                attitude_list += to_string(attitudes[i]);
            }
            const std::string prompt = templates::session_generation().render(
                {{"theme", theme},
                 {"rounds", std::to_string(opts.rounds_per_session)},
                 {"attitudes", attitude_list}});
            const std::string completion = gateway.complete(prompt, "msmtqa");

            MsmtqaSession session;
            session.session_id = session_id;
            session.theme = theme;
            bool parsed = false;
            try {
                json doc = parse_structured(completion, {"rounds"});
                int r = 0;
                for (const auto& round : doc["rounds"]) {
                    if (r >= opts.rounds_per_session) break;
                    session.rounds.push_back({round.value("user", ""),
                                              round.value("assistant", ""),
                                              attitudes[static_cast<std::size_t>(r)]});
                    ++r;
                }
                parsed = !session.rounds.empty();
            } catch (const Error&) {
                parsed = false;
            }
            if (!parsed) {
                // Structured fallback keeps the corpus well-formed whatever
                // the backend produced.
                session.rounds.clear();
                for (int r = 0; r < opts.rounds_per_session; ++r) {
                    MsmtqaRound round;
                    round.user = "Tell me something about " + theme + " (round " +
                                 std::to_string(r + 1) + ")";
                    round.assistant = completion;
                    round.attitude = attitudes[static_cast<std::size_t>(r)];
                    session.rounds.push_back(std::move(round));
                }
            }
            user.sessions.push_back(std::move(session));
            if (!opts.resume_path.empty()) {
                MsmtqaCorpus partial = corpus;
                partial.users.push_back(user);
                util::atomic_write(opts.resume_path, partial.to_json() + "\n");
            }
        }
        corpus.users.push_back(std::move(user));
    }
    if (!opts.resume_path.empty()) {
        util::atomic_write(opts.resume_path, corpus.to_json() + "\n");
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Efficiency and report formatting

EfficiencyReport efficiency_report(const std::vector<RoundTrace>& traces,
                                   const std::vector<JudgeVerdict>* verdicts) {
    EfficiencyReport report;
    if (traces.empty()) return report;
    for (const auto& t : traces) {
        report.mean_elapsed_ms += static_cast<double>(t.elapsed_ms);
        report.mean_external += t.external_knowledge_count;
        report.mean_memory += t.memory_knowledge_count;
        report.mean_irrelevant += t.irrelevant_knowledge_count;
    }
    const double n = static_cast<double>(traces.size());
    report.mean_elapsed_ms /= n;
    report.mean_external /= n;
    report.mean_memory /= n;
    report.mean_irrelevant /= n;
    if (verdicts && !verdicts->empty()) {
        double wins = 0, losses = 0, ties = 0;
        for (const auto& v : *verdicts) {
            if (v.outcome == JudgeOutcome::win) ++wins;
            else if (v.outcome == JudgeOutcome::loss) ++losses;
            else ++ties;
        }
        const double m = static_cast<double>(verdicts->size());
        report.win_rate = 100.0 * wins / m;
        report.loss_rate = 100.0 * losses / m;
        report.tie_rate = 100.0 * ties / m;
    }
    return report;
}

std::string format_report_table(const std::vector<ReportRow>& rows) {
    const std::vector<std::string> headers = {"Method", "Dataset",  "EM",
                                              "Precision", "Recall", "Hit Rate"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
        cells.push_back({row.method, row.dataset, util::format_pct(row.metrics.em),
                         util::format_pct(row.metrics.precision),
                         util::format_pct(row.metrics.recall),
                         util::format_pct(row.metrics.hit_rate)});
    }
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < headers.size(); ++c) {
        std::size_t w = headers[c].size();
        for (const auto& row : cells) w = std::max(w, row[c].size());
        widths.push_back(w);
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(widths[c] - row[c].size() + 2, ' ');
            }
        }
        out << "\n";
    };
    emit(headers);
    std::size_t total = 0;
    for (std::size_t c = 0; c < widths.size(); ++c) total += widths[c] + (c + 1 < widths.size() ? 2 : 0);
    out << std::string(total, '-') << "\n";
    for (const auto& row : cells) emit(row);
    return out.str();
}

}  // namespace eragent::eval
