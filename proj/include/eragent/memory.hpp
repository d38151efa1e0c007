#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eragent/embedder.hpp"

namespace eragent {

/// A snippet-content knowledge pair. The snippet is a succinct summary and
/// carries the embedding; the content is the full passage.
struct MemoryRecord {
    std::string id;
    std::string snippet;
    std::string content;
    std::vector<double> embedding;  // unit vector over the snippet
    std::string created_session;
    int created_round = 0;
};

/// Append-only knowledge store with snippet-level dedup. Many concurrent
/// readers, single serialized writer.
class MemoryStore {
public:
    MemoryStore() = default;
    explicit MemoryStore(std::string persistence_path)
        : persistence_path_(std::move(persistence_path)) {}

    MemoryStore(const MemoryStore& other)
        : records_(other.records()), persistence_path_(other.persistence_path_) {}
    MemoryStore& operator=(const MemoryStore& other) {
        if (this != &other) {
            auto copy = other.records();
            std::lock_guard lock(mu_);
            records_ = std::move(copy);
            persistence_path_ = other.persistence_path_;
        }
        return *this;
    }

    /// Appends unless a record with the same normalized snippet exists.
    /// Returns true when the record was added.
    bool add(MemoryRecord record);

    bool contains_snippet(const std::string& snippet) const;
    std::optional<MemoryRecord> find(const std::string& id) const;

    std::vector<MemoryRecord> records() const;
    std::size_t size() const;

    /// Writes the JSONL file atomically. Throws MemoryPersistFailed.
    void persist() const;
    void persist_to(const std::string& path) const;

    static MemoryStore load(const std::string& path);

    const std::string& persistence_path() const { return persistence_path_; }
    void set_persistence_path(std::string path) { persistence_path_ = std::move(path); }

private:
    mutable std::mutex mu_;
    std::vector<MemoryRecord> records_;
    std::string persistence_path_;
};

}  // namespace eragent
