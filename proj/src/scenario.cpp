#include "alpha/scenario.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "alpha/errors.hpp"

namespace alpha {

namespace {

namespace fs = std::filesystem;

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

void require_file(const std::string& path, const char* what) {
    if (!fs::exists(path)) {
        throw MissingFixture(std::string(what) + " missing: " + path);
    }
}

std::string fresh_store_path() {
    static std::atomic<unsigned> counter{0};
    const auto dir = fs::temp_directory_path() / "alpha-memory";
    fs::create_directories(dir);
    std::ostringstream name;
    name << "store-" << ::getpid() << "-" << counter++ << ".jsonl";
    return (dir / name.str()).string();
}

} // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("scenario not readable: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("scenario parse failure in " + path + ": " + e.what());
    }

    const std::string base_dir = fs::path(path).parent_path().string();
    Scenario scenario;
    try {
        scenario.name = j.at("name").get<std::string>();
        std::size_t index = 0;
        for (const auto& node : j.at("events")) {
            Event event;
            event.t = node.at("t").get<double>();
            event.kind = event_kind_from_string(node.at("kind").get<std::string>());
            event.payload = node.value("payload", "");
            if (event.t < 0) {
                throw ParseError("event " + std::to_string(index) + " has negative t");
            }
            if (event.kind != EventKind::Tick && event.payload.empty()) {
                throw ParseError("event " + std::to_string(index) + " has empty payload");
            }
            if (!scenario.events.empty() && event.t < scenario.events.back().t) {
                throw ParseError("event " + std::to_string(index) + " is out of order");
            }
            scenario.events.push_back(std::move(event));
            ++index;
        }
        scenario.prompt_pack = resolve(base_dir, j.at("prompt_pack").get<std::string>());
        scenario.model_fixtures = resolve(base_dir, j.at("model_fixtures").get<std::string>());
        scenario.search_fixtures = resolve(base_dir, j.at("search_fixtures").get<std::string>());
        scenario.expected = resolve(base_dir, j.value("expected", ""));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("scenario field error in " + path + ": " + e.what());
    }

    require_file(scenario.prompt_pack, "prompt pack");
    require_file(scenario.model_fixtures, "model fixtures");
    require_file(scenario.search_fixtures, "search fixtures");
    return scenario;
}

std::string serialize_scenario(const Scenario& s) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    auto& events = j["events"] = nlohmann::ordered_json::array();
    for (const auto& e : s.events) {
        events.push_back({{"t", e.t}, {"kind", to_string(e.kind)}, {"payload", e.payload}});
    }
    j["prompt_pack"] = s.prompt_pack;
    j["model_fixtures"] = s.model_fixtures;
    j["search_fixtures"] = s.search_fixtures;
    if (!s.expected.empty()) j["expected"] = s.expected;
    return j.dump(2) + "\n";
}

RunResult replay(const Scenario& scenario, const RunConfig& config, const ReplayHooks& hooks) {
    const PromptPack pack = PromptPack::load(scenario.prompt_pack);
    const FixtureSearchProvider provider = FixtureSearchProvider::load(scenario.search_fixtures);

    std::unique_ptr<ModelBackend> trigger_backend;
    std::unique_ptr<ModelBackend> streaming_backend;
    std::unique_ptr<ModelBackend> orchestrator_backend;
    MachineDeps deps;
    if (hooks.backend_override != nullptr) {
        deps.trigger_backend = hooks.backend_override;
        deps.streaming_backend = hooks.backend_override;
        deps.orchestrator_backend = hooks.backend_override;
    } else {
        trigger_backend = make_backend(config.trigger_backend, scenario.model_fixtures, hooks.transport);
        streaming_backend = make_backend(config.streaming_backend, scenario.model_fixtures, hooks.transport);
        orchestrator_backend =
            make_backend(config.orchestrator_backend, scenario.model_fixtures, hooks.transport);
        deps.trigger_backend = trigger_backend.get();
        deps.streaming_backend = streaming_backend.get();
        deps.orchestrator_backend = orchestrator_backend.get();
    }

    ToolRegistry tools;
    tools.register_tool(make_web_search_tool(provider, config.search_k));

    const std::string store_path =
        config.memory_path.empty() ? fresh_store_path() : config.memory_path;
    MemoryStore store(store_path);

    std::unique_ptr<DeliverySink> owned_sink;
    DeliverySink* sink = hooks.sink;
    if (sink == nullptr) {
        if (config.sink == SinkKind::TextLog) {
            owned_sink = std::make_unique<TextLogSink>(config.rate);
        } else {
            owned_sink = std::make_unique<ModeledSpeechSink>(config.rate);
        }
        sink = owned_sink.get();
    }

    SessionClock clock;
    deps.pack = &pack;
    deps.search = &provider;
    deps.tools = &tools;
    deps.store = &store;
    deps.sink = sink;
    deps.clock = &clock;

    Machine machine(scenario.name, config, deps);
    return machine.run_session(scenario.events);
}

DiffReport compare_trace(const SessionTrace& actual, const std::string& golden_path) {
    std::ifstream in(golden_path);
    if (!in) {
        throw ParseError("golden trace not readable: " + golden_path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string golden = buffer.str();
    const std::string produced = actual.serialize();

    if (golden == produced) {
        return {true, "traces identical (" + std::to_string(actual.entries.size()) + " entries)"};
    }

    std::vector<std::string> golden_lines;
    {
        std::istringstream lines(golden);
        std::string line;
        while (std::getline(lines, line)) {
            if (!line.empty()) golden_lines.push_back(line);
        }
    }
    for (const auto& line : golden_lines) {
        try {
            (void)nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("golden trace line unparseable: " + std::string(e.what()));
        }
    }

    const std::size_t n = std::min(golden_lines.size(), actual.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (serialize_entry(actual.entries[i]) != golden_lines[i]) {
            const auto& e = actual.entries[i];
            return {false, "first difference at entry (t=" + format_seconds(e.t) +
                               ", seq=" + std::to_string(e.seq) + "): expected " + golden_lines[i] +
                               " got " + serialize_entry(e)};
        }
    }
    if (golden_lines.size() > actual.entries.size()) {
        return {false, "actual trace is missing " +
                           std::to_string(golden_lines.size() - actual.entries.size()) +
                           " trailing entries, first missing: " + golden_lines[n]};
    }
    return {false, "actual trace has " + std::to_string(actual.entries.size() - golden_lines.size()) +
                       " extra trailing entries, first extra: " +
                       serialize_entry(actual.entries[n])};
}

} // namespace alpha
