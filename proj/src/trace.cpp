#include "alpha/trace.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace alpha {

const char* to_string(Unit u) {
    switch (u) {
        case Unit::Input: return "Input";
        case Unit::CPU: return "CPU";
        case Unit::ALU: return "ALU";
        case Unit::Memory: return "Memory";
        case Unit::Output: return "Output";
    }
    return "?";
}

std::string format_seconds(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

std::string format_seconds3(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    return buf;
}

std::string serialize_entry(const TraceEntry& e) {
    nlohmann::ordered_json j;
    const double rounded = std::round(e.t * 1000.0) / 1000.0;
    if (rounded == std::floor(rounded)) {
        j["t"] = static_cast<std::int64_t>(rounded);
    } else {
        j["t"] = rounded;
    }
    j["seq"] = e.seq;
    j["unit"] = to_string(e.unit);
    j["label"] = e.label;
    j["body"] = e.body;
    return j.dump();
}

std::string SessionTrace::serialize() const {
    std::string out;
    for (const auto& e : entries) {
        out += serialize_entry(e);
        out += '\n';
    }
    return out;
}

} // namespace alpha
