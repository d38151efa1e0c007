#include "eragent/learner.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/templates.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

std::string Learner::first_sentence_truncated(const std::string& content) {
    std::string trimmed = util::trim(content);
    std::size_t end = trimmed.size();
    for (std::size_t i = 0; i < trimmed.size(); ++i) {
        char c = trimmed[i];
        if (c == '.' || c == '!' || c == '?') {
            end = i + 1;
            break;
        }
    }
    std::string sentence = trimmed.substr(0, end);
    if (sentence.size() > 200) sentence.resize(200);
    return sentence;
}

std::string Learner::summarize_snippet(const std::string& content) const {
    try {
        const std::string prompt =
            templates::snippet_summary().render({{"content", content}});
        std::string summary = util::trim(gateway_.complete(prompt, "summarize"));
        if (summary.empty()) return first_sentence_truncated(content);
        if (summary.size() > 200) summary.resize(200);
        return summary;
    } catch (const Error&) {
        return first_sentence_truncated(content);
    }
}

int Learner::update_memory(MemoryStore& store, const std::vector<KnowledgeChunk>& kept_chunks,
                           const std::string& session, int round) const {
    int added = 0;
    for (const auto& chunk : kept_chunks) {
        if (chunk.source != ChunkSource::external) continue;
        const std::string snippet = summarize_snippet(chunk.text);
        if (store.contains_snippet(snippet)) continue;
        MemoryRecord record;
        record.id = "m-" + util::sha256_hex(snippet).substr(0, 16);
        record.snippet = snippet;
        record.content = chunk.text;
        record.embedding = embedder_.embed(snippet);
        record.created_session = session;
        record.created_round = round;
        if (store.add(std::move(record))) ++added;
    }
    if (added > 0) store.persist();
    return added;
}

UserProfile Learner::merge_profiles(const UserProfile& existing, const UserProfile& incremental,
                                    const std::string& session_id) {
    UserProfile merged = existing;
    merged.last_updated_session = session_id;
    if (incremental.facets_empty()) return merged;

    for (const auto& [topic, attitude] : incremental.theme_preferences) {
        bool found = false;
        for (auto& [etopic, eattitude] : merged.theme_preferences) {
            if (util::normalize_text(etopic) == util::normalize_text(topic)) {
                eattitude = attitude;  // latest evidence wins
                found = true;
                break;
            }
        }
        if (!found) merged.theme_preferences.emplace_back(topic, attitude);
    }

    auto merge_list = [](std::vector<std::string>& target, const std::vector<std::string>& extra) {
        std::set<std::string> seen;
        for (const auto& item : target) seen.insert(util::normalize_text(item));
        for (const auto& item : extra) {
            if (seen.insert(util::normalize_text(item)).second) target.push_back(item);
        }
    };
    merge_list(merged.question_demands, incremental.question_demands);
    merge_list(merged.personalized_information, incremental.personalized_information);

    for (const auto& [key, value] : incremental.basic_information) {
        bool found = false;
        for (auto& [ekey, evalue] : merged.basic_information) {
            if (util::normalize_text(ekey) == util::normalize_text(key)) {
                evalue = value;  // incremental value wins
                found = true;
                break;
            }
        }
        if (!found) merged.basic_information.emplace_back(key, value);
    }
    return merged;
}

UserProfile Learner::update_profile(const UserProfile& profile,
                                    const SessionTranscript& transcript,
                                    std::vector<std::string>* warnings) const {
    std::ostringstream text;
    for (const auto& turn : transcript.turns) {
        text << "User: " << turn.question << "\nAssistant: " << turn.answer << "\n";
    }
    json doc;
    try {
        const std::string prompt =
            templates::profile_extraction().render({{"transcript", text.str()}});
        doc = gateway_.complete_structured(
            prompt,
            {"theme_preferences", "question_demands", "basic_information",
             "personalized_information"},
            "profile");
    } catch (const Error& e) {
        if (warnings) warnings->push_back(std::string("profile extraction failed: ") + e.what());
        UserProfile unchanged = profile;
        unchanged.last_updated_session = transcript.session_id;
        return unchanged;
    }

    UserProfile incremental;
    for (const auto& entry : doc["theme_preferences"]) {
        if (entry.is_array() && entry.size() >= 2) {
            incremental.theme_preferences.emplace_back(
                entry.at(0).get<std::string>(), parse_attitude(entry.at(1).get<std::string>()));
        }
    }
    for (const auto& d : doc["question_demands"]) {
        if (d.is_string()) incremental.question_demands.push_back(d.get<std::string>());
    }
    for (const auto& entry : doc["basic_information"]) {
        if (entry.is_array() && entry.size() >= 2) {
            incremental.basic_information.emplace_back(entry.at(0).get<std::string>(),
                                                       entry.at(1).get<std::string>());
        }
    }
    for (const auto& p : doc["personalized_information"]) {
        if (p.is_string()) incremental.personalized_information.push_back(p.get<std::string>());
    }
    return merge_profiles(profile, incremental, transcript.session_id);
}

}  // namespace eragent
