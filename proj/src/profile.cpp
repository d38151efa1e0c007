#include "eragent/profile.hpp"

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

std::string to_string(Attitude a) {
    switch (a) {
        case Attitude::interest: return "interest";
        case Attitude::disinterest: return "disinterest";
        case Attitude::neutrality: return "neutrality";
    }
    return "neutrality";
}

Attitude parse_attitude(const std::string& text) {
    const std::string s = util::to_lower(util::trim(text));
    if (s == "interest") return Attitude::interest;
    if (s == "disinterest") return Attitude::disinterest;
    return Attitude::neutrality;
}

bool UserProfile::facets_empty() const {
    return theme_preferences.empty() && question_demands.empty() && basic_information.empty() &&
           personalized_information.empty();
}

std::string UserProfile::serialize() const {
    std::ostringstream out;
    if (!basic_information.empty()) {
        out << "Basic information:\n";
        for (const auto& [key, value] : basic_information) {
            out << "- " << key << ": " << value << "\n";
        }
    }
    if (!theme_preferences.empty()) {
        out << "Theme preferences:\n";
        for (const auto& [topic, attitude] : theme_preferences) {
            out << "- " << topic << " (" << to_string(attitude) << ")\n";
        }
    }
    if (!question_demands.empty()) {
        out << "Question demands:\n";
        for (const auto& d : question_demands) out << "- " << d << "\n";
    }
    if (!personalized_information.empty()) {
        out << "Personalized information:\n";
        for (const auto& p : personalized_information) out << "- " << p << "\n";
    }
    std::string s = out.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

std::string UserProfile::to_json() const {
    json doc;
    doc["theme_preferences"] = json::array();
    for (const auto& [topic, attitude] : theme_preferences) {
        doc["theme_preferences"].push_back({topic, to_string(attitude)});
    }
    doc["question_demands"] = question_demands;
    doc["basic_information"] = json::array();
    for (const auto& [key, value] : basic_information) {
        doc["basic_information"].push_back({key, value});
    }
    doc["personalized_information"] = personalized_information;
    doc["last_updated_session"] = last_updated_session;
    return doc.dump(2);
}

UserProfile UserProfile::from_json(const std::string& text) {
    json doc = json::parse(text);
    UserProfile p;
    for (const auto& entry : doc.value("theme_preferences", json::array())) {
        p.theme_preferences.emplace_back(entry.at(0).get<std::string>(),
                                         parse_attitude(entry.at(1).get<std::string>()));
    }
    p.question_demands = doc.value("question_demands", std::vector<std::string>{});
    for (const auto& entry : doc.value("basic_information", json::array())) {
        p.basic_information.emplace_back(entry.at(0).get<std::string>(),
                                         entry.at(1).get<std::string>());
    }
    p.personalized_information = doc.value("personalized_information", std::vector<std::string>{});
    p.last_updated_session = doc.value("last_updated_session", "");
    return p;
}

void UserProfile::save(const std::string& path) const {
    util::atomic_write(path, to_json() + "\n");
}

UserProfile UserProfile::load(const std::string& path) {
    if (!std::filesystem::exists(path)) return UserProfile{};
    return from_json(util::read_file(path));
}

}  // namespace eragent
