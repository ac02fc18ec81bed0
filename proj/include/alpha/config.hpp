#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "alpha/backend.hpp"
#include "alpha/input_unit.hpp"
#include "alpha/types.hpp"

namespace alpha {

enum class SinkKind { TextLog, ModeledSpeech };

struct RunConfig {
    BackendSpec trigger_backend;
    BackendSpec streaming_backend;
    BackendSpec orchestrator_backend;

    TriggerPolicy policy;
    std::string describe_prompt_id = "describe.blackjack";

    std::size_t window_len = 8;
    bool personalization = true;
    std::size_t search_k = 3;
    std::size_t memory_k = 3;
    std::string memory_path; // empty = fresh per-run temp store
    Verbosity verbosity = Verbosity::Brief;
    std::size_t injection_budget = 600;
    SinkKind sink = SinkKind::TextLog;
    double rate = 20.0; // delivery chars per second

    std::string user_id = "user-001";
    std::string user_role = "wearer";

    void validate() const; // ParseError on bad counts/budget
};

RunConfig load_config(const std::string& path); // paths resolved relative to the file
RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir);

} // namespace alpha
