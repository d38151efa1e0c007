#pragma once

#include <string>
#include <utility>
#include <vector>

namespace eragent {

enum class Attitude { interest, disinterest, neutrality };

std::string to_string(Attitude a);
Attitude parse_attitude(const std::string& text);  // unknown -> neutrality

/// Four-facet user description maintained by the experiential learner.
struct UserProfile {
    std::vector<std::pair<std::string, Attitude>> theme_preferences;  // topic unique
    std::vector<std::string> question_demands;
    std::vector<std::pair<std::string, std::string>> basic_information;
    std::vector<std::string> personalized_information;
    std::string last_updated_session;

    bool facets_empty() const;

    /// Deterministic serialization for reader prompts: basic information,
    /// theme preferences, question demands, personalized information.
    std::string serialize() const;

    std::string to_json() const;
    static UserProfile from_json(const std::string& text);

    void save(const std::string& path) const;
    static UserProfile load(const std::string& path);  // missing file -> empty profile
};

}  // namespace eragent
