#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alpha/config.hpp"
#include "alpha/machine.hpp"
#include "alpha/types.hpp"

namespace alpha {

struct Scenario {
    std::string name;
    std::vector<Event> events;
    std::string prompt_pack;     // resolved to absolute paths on load
    std::string model_fixtures;
    std::string search_fixtures;
    std::string expected;        // optional golden trace path ("" if absent)
};

Scenario load_scenario(const std::string& path); // ParseError, MissingFixture
std::string serialize_scenario(const Scenario& s);

// Test seams for replay: override the wire transport, the model backends, or
// observe the sink. Null members keep the defaults from the config.
struct ReplayHooks {
    Transport* transport = nullptr;
    const ModelBackend* backend_override = nullptr; // all three slots
    DeliverySink* sink = nullptr;
};

RunResult replay(const Scenario& scenario, const RunConfig& config,
                 const ReplayHooks& hooks = {});

struct DiffReport {
    bool identical = false;
    std::string summary; // first differing entry or length mismatch
};

DiffReport compare_trace(const SessionTrace& actual, const std::string& golden_path);

} // namespace alpha
