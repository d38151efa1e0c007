#include "eragent/memory.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eragent/errors.hpp"
#include "eragent/util.hpp"

namespace eragent {

using nlohmann::json;

bool MemoryStore::add(MemoryRecord record) {
    std::lock_guard lock(mu_);
    const std::string key = util::normalize_text(record.snippet);
    for (const auto& r : records_) {
        if (util::normalize_text(r.snippet) == key) return false;
    }
    records_.push_back(std::move(record));
    return true;
}

bool MemoryStore::contains_snippet(const std::string& snippet) const {
    std::lock_guard lock(mu_);
    const std::string key = util::normalize_text(snippet);
    for (const auto& r : records_) {
        if (util::normalize_text(r.snippet) == key) return true;
    }
    return false;
}

std::optional<MemoryRecord> MemoryStore::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
        if (r.id == id) return r;
    }
    return std::nullopt;
}

std::vector<MemoryRecord> MemoryStore::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

std::size_t MemoryStore::size() const {
    std::lock_guard lock(mu_);
    return records_.size();
}

void MemoryStore::persist() const {
    if (persistence_path_.empty()) return;
    persist_to(persistence_path_);
}

void MemoryStore::persist_to(const std::string& path) const {
    std::ostringstream out;
    for (const auto& r : records()) {
        json line{{"id", r.id},
                  {"snippet", r.snippet},
                  {"content", r.content},
                  {"embedding", r.embedding},
                  {"created_session", r.created_session},
                  {"created_round", r.created_round}};
        out << line.dump() << "\n";
    }
    util::atomic_write(path, out.str());
}

MemoryStore MemoryStore::load(const std::string& path) {
    MemoryStore store(path);
    std::ifstream in(path);
    if (!in) return store;  // missing file is an empty store
    std::string line;
    while (std::getline(in, line)) {
        if (util::trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) throw DatasetMalformed("bad memory line: " + line);
        MemoryRecord r;
        r.id = doc.at("id").get<std::string>();
        r.snippet = doc.at("snippet").get<std::string>();
        r.content = doc.at("content").get<std::string>();
        r.embedding = doc.at("embedding").get<std::vector<double>>();
        r.created_session = doc.value("created_session", "");
        r.created_round = doc.value("created_round", 0);
        store.add(std::move(r));
    }
    return store;
}

}  // namespace eragent
