#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "reflect/core/error.hpp"
#include "reflect/service/types.hpp"
#include "reflect/service/wire.hpp"

namespace reflect::service {

struct Page {
    std::size_t number = 1;  // 1-based
    std::size_t size = 20;
};

/// Append-only history of analyzed submissions.
class HistoryStore {
public:
    virtual ~HistoryStore() = default;
    /// Assigns the next id and returns the stored record. Throws
    /// StorageFailure when the record could not be made durable.
    virtual StoredReflection append(StoredReflection record) = 0;
    /// Newest first.
    virtual std::vector<StoredReflection> history(const std::string& author_id, Page page) const = 0;
    virtual std::size_t size() const = 0;
};

/// JSON-lines file store with an in-memory index. Without a path it keeps
/// records in memory only.
class JsonlStore final : public HistoryStore {
public:
    JsonlStore() = default;

    explicit JsonlStore(std::filesystem::path path) : path_(std::move(path)) {
        replay();
        out_.open(*path_, std::ios::app | std::ios::binary);
        if (!out_) throw Error(Errc::storage_failure, "cannot open store '" + path_->string() + "' for appending");
    }

    StoredReflection append(StoredReflection record) override {
        std::unique_lock lock(mutex_);
        record.id = next_id_;
        if (path_) {
            out_ << to_json(record).dump() << '\n';
            out_.flush();
            if (!out_) {
                out_.clear();
                throw Error(Errc::storage_failure, "write to '" + path_->string() + "' failed");
            }
        }
        ++next_id_;
        index_[record.author_id].push_back(records_.size());
        records_.push_back(record);
        return record;
    }

    std::vector<StoredReflection> history(const std::string& author_id, Page page) const override {
        std::shared_lock lock(mutex_);
        std::vector<StoredReflection> out;
        const auto it = index_.find(author_id);
        if (it == index_.end() || page.size == 0 || page.number == 0) return out;
        const auto& positions = it->second;
        const std::size_t skip = (page.number - 1) * page.size;
        if (skip >= positions.size()) return out;
        // positions are in append order; walk them backwards for newest first
        for (std::size_t k = skip; k < positions.size() && out.size() < page.size; ++k) {
            out.push_back(records_[positions[positions.size() - 1 - k]]);
        }
        return out;
    }

    std::size_t size() const override {
        std::shared_lock lock(mutex_);
        return records_.size();
    }

    /// Every record in append order.
    std::vector<StoredReflection> all() const {
        std::shared_lock lock(mutex_);
        return records_;
    }

private:
    void replay() {
        std::ifstream in(*path_, std::ios::binary);
        if (!in) return;  // fresh store
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            StoredReflection r;
            try {
                r = stored_from_json(json::parse(line));
            } catch (const std::exception& e) {
                throw Error(Errc::storage_failure,
                            path_->string() + " line " + std::to_string(lineno) + " is unreadable: " + e.what());
            }
            if (r.id < next_id_) {
                throw Error(Errc::storage_failure, path_->string() + " line " + std::to_string(lineno) + ": id " +
                                                       std::to_string(r.id) + " is not increasing");
            }
            next_id_ = r.id + 1;
            index_[r.author_id].push_back(records_.size());
            records_.push_back(std::move(r));
        }
    }

    std::optional<std::filesystem::path> path_;
    std::ofstream out_;
    mutable std::shared_mutex mutex_;
    std::vector<StoredReflection> records_;
    std::map<std::string, std::vector<std::size_t>> index_;
    std::uint64_t next_id_ = 1;
};

}  // namespace reflect::service
