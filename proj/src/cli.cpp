#include "eragent/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "eragent/app.hpp"
#include "eragent/errors.hpp"
#include "eragent/eval.hpp"
#include "eragent/service.hpp"
#include "eragent/util.hpp"

namespace eragent {

namespace {

using nlohmann::json;

struct GlobalFlags {
    std::string config_path;
    std::string backend;
    std::string mock_script;
    std::string term_dict;
    std::string trace_out;
    double tau = -1.0;
    int theta = -1;
    int top_k = -1;
};

AppConfig resolve_config(const GlobalFlags& flags) {
    // Precedence: CLI flags over config file over built-in defaults.
    AppConfig cfg;
    if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
    if (!flags.backend.empty()) cfg.set("backend", flags.backend);
    if (!flags.mock_script.empty()) cfg.set("mock_script", flags.mock_script);
    if (!flags.term_dict.empty()) cfg.set("term_dict", flags.term_dict);
    if (!flags.trace_out.empty()) cfg.set("paths.trace_out", flags.trace_out);
    if (flags.tau >= 0.0) cfg.pipeline.trigger.tau = flags.tau;
    if (flags.theta >= 1) cfg.pipeline.trigger.theta = flags.theta;
    if (flags.top_k >= 1) cfg.pipeline.retriever.top_k = flags.top_k;
    return cfg;
}

int cmd_eval(const GlobalFlags& flags, const std::string& dataset_path,
             const std::string& format, const std::string& setting, int sample_n, unsigned seed,
             const std::string& report_json) {
    AppConfig cfg = resolve_config(flags);
    cfg.pipeline.components = setting_components(setting);
    Runtime rt = build_runtime(cfg);
    Pipeline pipeline = rt.make_pipeline();

    std::optional<eval::SampleSpec> sample;
    if (sample_n > 0) sample = eval::SampleSpec{static_cast<std::size_t>(sample_n), seed};
    const auto fmt = format == "msmtqa_json" ? eval::DatasetFormat::msmtqa_json
                                             : eval::DatasetFormat::qa_jsonl;
    const auto items = eval::load_dataset(dataset_path, fmt, sample);
    if (items.empty()) throw DatasetMalformed("dataset is empty: " + dataset_path);

    std::vector<std::pair<std::string, std::vector<std::string>>> scored;
    std::vector<RoundTrace> traces;
    UserProfile profile;
    for (const auto& item : items) {
        MemoryStore memory;  // one-round tasks use no memory
        auto [answer, trace] = pipeline.answer_question(item.question, memory, profile);
        scored.emplace_back(answer.text, item.gold_answers);
        traces.push_back(std::move(trace));
    }
    const eval::MetricReport report = eval::aggregate(scored);

    eval::ReportRow row;
    row.method = setting;
    row.dataset = std::filesystem::path(dataset_path).stem().string();
    row.metrics = report;
    std::cout << eval::format_report_table({row});

    if (!cfg.trace_out.empty()) write_traces_jsonl(traces, cfg.trace_out);
    if (!report_json.empty()) {
        json doc{{"method", setting},
                 {"dataset", row.dataset},
                 {"n", report.n},
                 {"em", report.em},
                 {"precision", report.precision},
                 {"recall", report.recall},
                 {"hit_rate", report.hit_rate}};
        util::atomic_write(report_json, doc.dump(2) + "\n");
    }
    return 0;
}

std::vector<std::string> load_questions(const std::string& path) {
    std::vector<std::string> questions;
    const std::string text = util::read_file(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = util::trim(line);
        if (line.empty()) continue;
        if (line.front() == '{') {
            json doc = json::parse(line, nullptr, false);
            if (!doc.is_discarded() && doc.contains("question")) {
                questions.push_back(doc["question"].get<std::string>());
                continue;
            }
        }
        questions.push_back(line);
    }
    return questions;
}

int cmd_tau_sweep(const GlobalFlags& flags, const std::string& questions_path,
                  const std::string& taus_csv, const std::string& report_json) {
    AppConfig cfg = resolve_config(flags);
    Runtime rt = build_runtime(cfg);
    const auto questions = load_questions(questions_path);
    if (questions.empty()) throw DatasetMalformed("no questions in " + questions_path);

    std::vector<double> taus;
    std::istringstream in(taus_csv);
    std::string tok;
    while (std::getline(in, tok, ',')) taus.push_back(std::stod(util::trim(tok)));

    // First pass at tau = 1.0 seeds memory; no memory knowledge is used yet.
    PipelineConfig first_cfg = cfg.pipeline;
    first_cfg.trigger.tau = 1.0;
    MemoryStore seeded;
    UserProfile profile;
    auto first = rt.make_pipeline(first_cfg).run_session(questions, seeded, profile, "pass1");
    // The learned profile is cleared before the second pass.
    profile = UserProfile{};

    json report = json::array();
    auto emit_row = [&](double tau, const eval::EfficiencyReport& eff) {
        std::ostringstream row;
        row << "tau=" << tau << "  time_ms=" << util::format_pct(eff.mean_elapsed_ms)
            << "  external=" << util::format_pct(eff.mean_external)
            << "  memory=" << util::format_pct(eff.mean_memory)
            << "  irrelevant=" << util::format_pct(eff.mean_irrelevant);
        if (eff.win_rate) {
            row << "  win=" << util::format_pct(*eff.win_rate)
                << "  loss=" << util::format_pct(*eff.loss_rate)
                << "  tie=" << util::format_pct(*eff.tie_rate);
        }
        std::cout << row.str() << "\n";
        json j{{"tau", tau},
               {"time_ms", eff.mean_elapsed_ms},
               {"external", eff.mean_external},
               {"memory", eff.mean_memory},
               {"irrelevant", eff.mean_irrelevant}};
        if (eff.win_rate) {
            j["win_rate"] = *eff.win_rate;
            j["loss_rate"] = *eff.loss_rate;
            j["tie_rate"] = *eff.tie_rate;
        }
        report.push_back(j);
    };
    emit_row(1.0, eval::efficiency_report(first.traces));

    for (double tau : taus) {
        PipelineConfig run_cfg = cfg.pipeline;
        run_cfg.trigger.tau = tau;
        MemoryStore memory;  // fresh copy of the seeded store per tau
        for (const auto& r : seeded.records()) memory.add(r);
        auto second =
            rt.make_pipeline(run_cfg).run_session(questions, memory, profile, "pass2");
        std::vector<eval::JudgeVerdict> verdicts;
        for (std::size_t i = 0;
             i < second.transcript.turns.size() && i < first.transcript.turns.size(); ++i) {
            eval::JudgeOptions jopts;
            jopts.mode = eval::JudgeMode::with_personalization;
            verdicts.push_back(eval::judge_pairwise(
                *rt.gateway, questions[i], first.transcript.turns[i].answer,
                second.transcript.turns[i].answer, profile, jopts));
        }
        emit_row(tau, eval::efficiency_report(second.traces, &verdicts));
    }
    if (!report_json.empty()) util::atomic_write(report_json, report.dump(2) + "\n");
    return 0;
}

int cmd_chat(const GlobalFlags& flags, const std::string& user_id) {
    AppConfig cfg = resolve_config(flags);
    Runtime rt = build_runtime(cfg);
    Pipeline pipeline = rt.make_pipeline();

    MemoryStore memory;
    UserProfile profile;
    std::string memory_file, profile_file;
    if (!cfg.memory_path.empty()) {
        memory_file = cfg.memory_path + "/" + user_id + ".jsonl";
        memory = MemoryStore::load(memory_file);
        memory.set_persistence_path(memory_file);
    }
    if (!cfg.profile_path.empty()) {
        profile_file = cfg.profile_path + "/" + user_id + ".json";
        profile = UserProfile::load(profile_file);
    }

    SessionTranscript transcript;
    transcript.session_id = "chat-" + user_id;
    std::vector<RoundTrace> traces;
    std::string line;
    while (std::getline(std::cin, line)) {
        line = util::trim(line);
        if (line.empty()) continue;
        try {
            auto [answer, trace] = pipeline.answer_question(
                line, memory, profile, transcript.session_id,
                static_cast<int>(transcript.turns.size()));
            transcript.turns.push_back(
                {line, answer.text, static_cast<int>(transcript.turns.size())});
            std::cout << "answer: " << answer.text << "\n";
            std::cout << "trace: external=" << trace.external_knowledge_count
                      << " memory=" << trace.memory_knowledge_count
                      << " irrelevant=" << trace.irrelevant_knowledge_count
                      << " backoff=" << (trace.backoff ? "yes" : "no")
                      << " elapsed_ms=" << trace.elapsed_ms << "\n";
            traces.push_back(std::move(trace));
        } catch (const Error& e) {
            std::cout << "error: " << e.what() << "\n";
        }
    }
    if (!transcript.turns.empty()) {
        Learner learner(*rt.gateway, *rt.embedder);
        profile = learner.update_profile(profile, transcript);
        if (!profile_file.empty()) profile.save(profile_file);
        if (!memory_file.empty()) memory.persist();
    }
    if (!cfg.trace_out.empty()) write_traces_jsonl(traces, cfg.trace_out);
    return 0;
}

int cmd_serve(const GlobalFlags& flags, const std::string& bind) {
    AppConfig cfg = resolve_config(flags);
    Runtime rt = build_runtime(cfg);
    AnswerService service(rt);
    httplib::Server server;
    service.register_routes(server);

    std::string host = bind;
    int port = 8080;
    auto colon = bind.rfind(':');
    if (colon != std::string::npos) {
        host = bind.substr(0, colon);
        port = std::stoi(bind.substr(colon + 1));
    }
    if (host.empty()) host = "0.0.0.0";
    std::cout << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) throw Error("failed to bind " + bind);
    return 0;
}

int cmd_gen_msmtqa(const GlobalFlags& flags, const std::string& out_path, int sessions,
                   int rounds, unsigned seed) {
    AppConfig cfg = resolve_config(flags);
    Runtime rt = build_runtime(cfg);
    eval::MsmtqaOptions opts;
    opts.sessions_per_user = sessions;
    opts.rounds_per_session = rounds;
    opts.topic_seed = seed;
    opts.resume_path = out_path;
    auto corpus = eval::generate_msmtqa(*rt.gateway, eval::default_personas(), opts);
    util::atomic_write(out_path, corpus.to_json() + "\n");
    std::cout << "wrote " << corpus.users.size() << " users to " << out_path << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Modular retrieval-augmented-generation pipeline"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--config", flags.config_path, "Configuration file (key = value)");
    app.add_option("--backend", flags.backend, "LLM backend: http or mock");
    app.add_option("--mock-script", flags.mock_script, "Mock backend script (JSON)");
    app.add_option("--term-dict", flags.term_dict, "Terminology dictionary (JSON)");
    app.add_option("--trace-out", flags.trace_out, "Round trace output (JSONL)");
    app.add_option("--tau", flags.tau, "Similarity threshold override");
    app.add_option("--theta", flags.theta, "Popularity threshold override");
    app.add_option("--top-k", flags.top_k, "Retriever top-k override");

    auto* eval_cmd = app.add_subcommand("eval", "One-round accuracy evaluation");
    std::string dataset, format = "qa_jsonl", setting = "standard", report_json;
    int sample_n = 0;
    unsigned seed = 0;
    eval_cmd->add_option("--dataset", dataset, "Dataset path")->required();
    eval_cmd->add_option("--format", format, "qa_jsonl or msmtqa_json")
        ->check(CLI::IsMember({"qa_jsonl", "msmtqa_json"}));
    eval_cmd
        ->add_option("--setting", setting,
                     "standard | rewriter | rewriter_plus | filter | rewriter_plus_filter")
        ->check(CLI::IsMember(
            {"standard", "rewriter", "rewriter_plus", "filter", "rewriter_plus_filter"}));
    eval_cmd->add_option("--sample", sample_n, "Sample size (0 = all)");
    eval_cmd->add_option("--seed", seed, "Sampling seed");
    eval_cmd->add_option("--report-json", report_json, "Write a JSON report here");

    auto* sweep_cmd = app.add_subcommand("tau-sweep", "Efficiency sweep over tau");
    std::string questions_path, taus = "0.2,0.4,0.6,0.8", sweep_report;
    sweep_cmd->add_option("--questions", questions_path, "Questions file")->required();
    sweep_cmd->add_option("--taus", taus, "Comma-separated tau values");
    sweep_cmd->add_option("--report-json", sweep_report, "Write a JSON report here");

    auto* chat_cmd = app.add_subcommand("chat", "Interactive REPL");
    std::string user_id = "default";
    chat_cmd->add_option("--user", user_id, "User id");

    auto* serve_cmd = app.add_subcommand("serve", "HTTP answering service");
    std::string bind = "127.0.0.1:8080";
    serve_cmd->add_option("--bind", bind, "host:port");

    auto* gen_cmd = app.add_subcommand("gen-msmtqa", "Generate a simulated session corpus");
    std::string out_path = "msmtqa.json";
    int sessions = 2, rounds = 3;
    unsigned gen_seed = 0;
    gen_cmd->add_option("--out", out_path, "Output path");
    gen_cmd->add_option("--sessions", sessions, "Sessions per user");
    gen_cmd->add_option("--rounds", rounds, "Rounds per session");
    gen_cmd->add_option("--seed", gen_seed, "Schedule seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval_cmd->parsed()) {
            return cmd_eval(flags, dataset, format, setting, sample_n, seed, report_json);
        }
        if (sweep_cmd->parsed()) {
            return cmd_tau_sweep(flags, questions_path, taus, sweep_report);
        }
        if (chat_cmd->parsed()) return cmd_chat(flags, user_id);
        if (serve_cmd->parsed()) return cmd_serve(flags, bind);
        if (gen_cmd->parsed()) return cmd_gen_msmtqa(flags, out_path, sessions, rounds, gen_seed);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace eragent
