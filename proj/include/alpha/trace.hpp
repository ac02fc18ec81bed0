#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace alpha {

enum class Unit { Input, CPU, ALU, Memory, Output };

const char* to_string(Unit u);

struct TraceEntry {
    double t = 0.0;
    std::uint64_t seq = 0;
    Unit unit = Unit::Input;
    std::string label;
    std::string body;
};

// Seconds rendered with up to 3 decimals, trailing zeros trimmed ("8", "8.2").
std::string format_seconds(double t);
// Seconds rendered with exactly 3 decimals ("8.000"), used by sink logs.
std::string format_seconds3(double t);

// One line-delimited JSON object, keys in order (t, seq, unit, label, body).
std::string serialize_entry(const TraceEntry& e);

struct SessionTrace {
    std::vector<TraceEntry> entries;

    // One entry per line, newline-terminated.
    std::string serialize() const;
};

} // namespace alpha
