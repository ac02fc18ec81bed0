#include "alpha/memory_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "alpha/errors.hpp"

namespace alpha {

namespace {

// 2025-01-01T00:00:00Z
constexpr std::time_t kSessionEpoch = 1735689600;

} // namespace

std::string SessionClock::now_iso() const {
    std::time_t t = kSessionEpoch + static_cast<std::time_t>(std::floor(session_t_));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string serialize_record(const MemoryRecord& r) {
    nlohmann::ordered_json j;
    j["record_id"] = r.record_id;
    j["user_id"] = r.user_id;
    j["user_role"] = r.user_role;
    j["summary"] = r.summary;
    j["final_output"] = r.final_output;
    j["timestamp"] = r.timestamp;
    j["topic"] = r.topic;
    return j.dump();
}

MemoryRecord parse_record(const std::string& line) {
    try {
        const auto j = nlohmann::json::parse(line);
        return {j.at("record_id").get<std::string>(), j.at("user_id").get<std::string>(),
                j.at("user_role").get<std::string>(), j.at("summary").get<std::string>(),
                j.at("final_output").get<std::string>(), j.at("timestamp").get<std::string>(),
                j.at("topic").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad memory record line: ") + e.what());
    }
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

MemoryStore::MemoryStore(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return; // fresh store
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        index_.push_back(parse_record(line));
    }
}

void MemoryStore::write(MemoryRecord record) {
    if (record.record_id.empty() || record.timestamp.empty() || record.summary.empty() ||
        record.topic.empty()) {
        throw Error("memory record with missing required field");
    }
    std::lock_guard lock(mu_);
    pending_.push_back(std::move(record));
}

std::size_t MemoryStore::flush() {
    std::lock_guard lock(mu_);
    if (pending_.empty()) return 0;

    std::unordered_set<std::string> ids;
    std::unordered_set<std::string> stamps;
    for (const auto& r : index_) {
        ids.insert(r.record_id);
        stamps.insert(r.timestamp);
    }
    for (const auto& r : pending_) {
        if (!ids.insert(r.record_id).second) {
            throw DuplicateId("duplicate record_id: " + r.record_id);
        }
        if (!stamps.insert(r.timestamp).second) {
            throw DuplicateId("duplicate timestamp: " + r.timestamp);
        }
    }

    const std::string tmp = path_ + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw PersistenceFailure("cannot open " + tmp);
        }
        for (const auto& r : index_) out << serialize_record(r) << '\n';
        for (const auto& r : pending_) out << serialize_record(r) << '\n';
        out.flush();
        if (!out) {
            throw PersistenceFailure("short write to " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) {
        throw PersistenceFailure("rename failed: " + ec.message());
    }

    const std::size_t n = pending_.size();
    index_.insert(index_.end(), std::make_move_iterator(pending_.begin()),
                  std::make_move_iterator(pending_.end()));
    pending_.clear();
    return n;
}

std::vector<MemoryRecord> MemoryStore::retrieve(const MemoryQuery& query) const {
    std::lock_guard lock(mu_);
    struct Scored {
        std::size_t score;
        const MemoryRecord* rec;
    };
    std::vector<Scored> scored;
    for (const auto& r : index_) {
        std::set<std::string> doc_tokens;
        for (auto& tok : tokenize(r.topic)) doc_tokens.insert(tok);
        for (auto& tok : tokenize(r.summary)) doc_tokens.insert(tok);
        std::set<std::string> matched;
        for (const auto& term : query.topic_terms) {
            if (doc_tokens.count(term)) matched.insert(term);
        }
        if (!matched.empty()) {
            scored.push_back({matched.size(), &r});
        }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.rec->timestamp > b.rec->timestamp;
    });
    std::vector<MemoryRecord> out;
    for (const auto& s : scored) {
        if (out.size() >= query.k) break;
        out.push_back(*s.rec);
    }
    return out;
}

std::size_t MemoryStore::flushed_count() const {
    std::lock_guard lock(mu_);
    return index_.size();
}

std::size_t MemoryStore::pending_count() const {
    std::lock_guard lock(mu_);
    return pending_.size();
}

std::vector<MemoryRecord> MemoryStore::flushed_records() const {
    std::lock_guard lock(mu_);
    return index_;
}

bool MemoryStore::has_timestamp(const std::string& ts) const {
    std::lock_guard lock(mu_);
    for (const auto& r : index_) {
        if (r.timestamp == ts) return true;
    }
    for (const auto& r : pending_) {
        if (r.timestamp == ts) return true;
    }
    return false;
}

ModelRequest build_record_request(const PromptPack& pack, const Exchange& exchange) {
    std::string body = "Service: " + exchange.proposal.service_name + "\n";
    body += "Trigger: " + std::string(to_string(exchange.trigger.cause)) + " at " +
            std::to_string(exchange.trigger.t) + "s\n";
    body += "Response: " + exchange.response.full_text;
    return {"memory.record", {{Role::System, pack.get("memory.record")}, {Role::User, body}}};
}

MemoryRecord build_record(const Exchange& exchange, const std::string& user_id,
                          const std::string& user_role, const ModelBackend& backend,
                          const PromptPack& pack, const Clock& clock,
                          const MemoryStore& store) {
    if (exchange.response.full_text.empty()) {
        throw Error("build_record: empty response text");
    }
    const std::string output = backend.complete(build_record_request(pack, exchange)).text;

    std::string summary;
    std::string topic;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("Summary:", 0) == 0) {
            summary = line.substr(8);
        } else if (line.rfind("Topic:", 0) == 0) {
            topic = line.substr(6);
        }
    }
    auto trim = [](std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(summary);
    trim(topic);
    if (summary.empty() || topic.empty()) {
        throw MalformedRecord("record condensation missing Summary/Topic labels");
    }

    std::string timestamp = clock.now_iso();
    if (store.has_timestamp(timestamp)) {
        int n = 1;
        while (store.has_timestamp(timestamp + "-" + std::to_string(n))) ++n;
        timestamp += "-" + std::to_string(n);
    }

    return {"rec-" + timestamp, user_id, user_role, summary,
            exchange.response.instruction.text, timestamp, topic};
}

std::string render_record_line(const MemoryRecord& r) {
    return "- [" + r.timestamp + "] " + r.topic + ": " + r.summary;
}

std::string inject(const std::string& prompt, const std::vector<MemoryRecord>& records,
                   std::size_t budget) {
    std::string block;
    std::size_t used = 0;
    for (const auto& r : records) {
        const std::string line = render_record_line(r);
        if (used + line.size() > budget) break;
        used += line.size();
        if (!block.empty()) block += '\n';
        block += line;
    }
    if (block.empty()) return prompt;
    return prompt + "\n\n" + block;
}

} // namespace alpha
