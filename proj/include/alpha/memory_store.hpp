#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

#include "alpha/backend.hpp"
#include "alpha/types.hpp"

namespace alpha {

struct MemoryRecord {
    std::string record_id;
    std::string user_id;
    std::string user_role;
    std::string summary;
    std::string final_output;
    std::string timestamp; // ISO-8601 UTC, unique per store (collision suffix "-n")
    std::string topic;
};

struct MemoryQuery {
    std::vector<std::string> topic_terms; // lowercase tokens
    std::size_t k = 0;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual std::string now_iso() const = 0;
};

class FixedClock : public Clock {
public:
    explicit FixedClock(std::string value) : value_(std::move(value)) {}
    void set(std::string value) { value_ = std::move(value); }
    std::string now_iso() const override { return value_; }

private:
    std::string value_;
};

// Scenario-relative deterministic clock: a fixed base instant plus the
// session's current time in whole seconds.
class SessionClock : public Clock {
public:
    SessionClock() = default;
    void set_session_time(double t) { session_t_ = t; }
    std::string now_iso() const override;

private:
    double session_t_ = 0.0;
};

// Line-delimited JSON store, one record per line. Writes are enqueued and
// become visible to retrieve only after flush (write-temp-then-rename).
class MemoryStore {
public:
    explicit MemoryStore(std::string path); // loads existing file if present

    void write(MemoryRecord record);
    std::size_t flush(); // PersistenceFailure, DuplicateId (pending retained)

    std::vector<MemoryRecord> retrieve(const MemoryQuery& query) const;

    const std::string& path() const { return path_; }
    std::size_t flushed_count() const;
    std::size_t pending_count() const;
    std::vector<MemoryRecord> flushed_records() const;
    bool has_timestamp(const std::string& ts) const; // flushed and pending

private:
    std::string path_;
    std::vector<MemoryRecord> index_;
    std::vector<MemoryRecord> pending_;
    mutable std::mutex mu_;
};

std::string serialize_record(const MemoryRecord& r); // fixed key order
MemoryRecord parse_record(const std::string& line);  // ParseError

// Lowercased alphanumeric tokens.
std::vector<std::string> tokenize(const std::string& text);

struct Exchange {
    TriggerSignal trigger;
    ServiceProposal proposal;
    ServiceResponse response;
};

ModelRequest build_record_request(const PromptPack& pack, const Exchange& exchange);

// Condenses one exchange into a record via the backend ("Summary:"/"Topic:"
// labeled lines). Timestamp comes from the clock, suffixed on collision.
MemoryRecord build_record(const Exchange& exchange, const std::string& user_id,
                          const std::string& user_role, const ModelBackend& backend,
                          const PromptPack& pack, const Clock& clock,
                          const MemoryStore& store);

std::string render_record_line(const MemoryRecord& r);

// Appends whole record lines to the prompt while their total size stays
// within budget; never splits a record.
std::string inject(const std::string& prompt, const std::vector<MemoryRecord>& records,
                   std::size_t budget);

} // namespace alpha
