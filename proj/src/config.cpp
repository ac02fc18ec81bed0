#include "alpha/config.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "alpha/errors.hpp"

namespace alpha {

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

BackendSpec backend_from_json(const nlohmann::json& j, const std::string& base_dir) {
    BackendSpec spec;
    if (j.contains("scripted")) {
        spec.kind = BackendSpec::Kind::Scripted;
        spec.fixture_path = resolve(base_dir, j.at("scripted").get<std::string>());
    } else if (j.contains("remote")) {
        spec.kind = BackendSpec::Kind::Remote;
        const auto& r = j.at("remote");
        spec.endpoint = r.at("endpoint").get<std::string>();
        spec.model = r.at("model").get<std::string>();
        spec.credential_env = r.value("credential-env", "");
        spec.timeout_seconds = r.value("timeout", 10.0);
    } else {
        throw ParseError("backend spec must be {\"scripted\": path} or {\"remote\": {...}}");
    }
    return spec;
}

Verbosity verbosity_from_string(const std::string& s) {
    if (s == "brief") return Verbosity::Brief;
    if (s == "full") return Verbosity::Full;
    if (s == "silent") return Verbosity::Silent;
    throw ParseError("unknown verbosity: " + s);
}

SinkKind sink_from_string(const std::string& s) {
    if (s == "text-log") return SinkKind::TextLog;
    if (s == "modeled-speech") return SinkKind::ModeledSpeech;
    throw ParseError("unknown sink: " + s);
}

} // namespace

void RunConfig::validate() const {
    if (window_len < 1 || search_k < 1 || memory_k < 1) {
        throw ParseError("window-len, search-k and memory-k must be >= 1");
    }
    if (policy.cooldown < 0) {
        throw ParseError("cooldown must be >= 0");
    }
    if (rate <= 0) {
        throw ParseError("rate must be positive");
    }
    if (policy.mode == PolicyMode::ModelBacked && policy.prompt_id.empty()) {
        throw ParseError("model-backed policy requires a prompt-id");
    }
}

RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir) {
    RunConfig config;
    if (j.contains("backends")) {
        const auto& b = j.at("backends");
        if (b.contains("trigger")) config.trigger_backend = backend_from_json(b.at("trigger"), base_dir);
        if (b.contains("streaming")) config.streaming_backend = backend_from_json(b.at("streaming"), base_dir);
        if (b.contains("orchestrator")) config.orchestrator_backend = backend_from_json(b.at("orchestrator"), base_dir);
    }
    if (j.contains("policy")) {
        const auto& p = j.at("policy");
        const std::string mode = p.value("mode", "rule-based");
        if (mode == "rule-based") {
            config.policy.mode = PolicyMode::RuleBased;
        } else if (mode == "model-backed") {
            config.policy.mode = PolicyMode::ModelBacked;
        } else {
            throw ParseError("unknown policy mode: " + mode);
        }
        if (p.contains("predicate")) {
            config.policy.predicate = change_predicate_from_string(p.at("predicate").get<std::string>());
        }
        if (p.contains("command-markers")) {
            config.policy.command_markers = p.at("command-markers").get<std::vector<std::string>>();
        }
        config.policy.cooldown = p.value("cooldown", config.policy.cooldown);
        config.policy.prompt_id = p.value("prompt-id", config.policy.prompt_id);
        config.policy.dwell_n = p.value("dwell-n", config.policy.dwell_n);
        config.policy.jaccard_threshold = p.value("jaccard-threshold", config.policy.jaccard_threshold);
    }
    config.describe_prompt_id = j.value("describe-prompt-id", config.describe_prompt_id);
    config.window_len = j.value("window-len", config.window_len);
    config.personalization = j.value("personalization", config.personalization);
    config.search_k = j.value("search-k", config.search_k);
    config.memory_k = j.value("memory-k", config.memory_k);
    if (j.contains("memory-path")) {
        config.memory_path = resolve(base_dir, j.at("memory-path").get<std::string>());
    }
    if (j.contains("verbosity")) {
        config.verbosity = verbosity_from_string(j.at("verbosity").get<std::string>());
    }
    config.injection_budget = j.value("injection-budget", config.injection_budget);
    if (j.contains("sink")) {
        config.sink = sink_from_string(j.at("sink").get<std::string>());
    }
    config.rate = j.value("rate", config.rate);
    config.user_id = j.value("user-id", config.user_id);
    config.user_role = j.value("user-role", config.user_role);
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("config not readable: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config parse failure in " + path + ": " + e.what());
    }
    return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

} // namespace alpha
