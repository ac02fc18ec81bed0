// Scenario replay driver: run, compare, record-golden, validate-fixtures.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "alpha/scenario.hpp"

namespace {

alpha::RunConfig resolve_config(const std::string& scenario_path, const std::string& config_path) {
    if (!config_path.empty()) {
        return alpha::load_config(config_path);
    }
    const auto sibling =
        std::filesystem::path(scenario_path).parent_path() / "config.json";
    if (std::filesystem::exists(sibling)) {
        return alpha::load_config(sibling.string());
    }
    return alpha::RunConfig{};
}

int run_and_emit(const std::string& scenario_path, const std::string& config_path,
                 const std::string& trace_out) {
    const auto scenario = alpha::load_scenario(scenario_path);
    const auto config = resolve_config(scenario_path, config_path);
    const auto result = alpha::replay(scenario, config);
    const std::string serialized = result.trace.serialize();
    if (trace_out.empty()) {
        std::cout << serialized;
    } else {
        std::ofstream out(trace_out, std::ios::trunc);
        out << serialized;
    }
    if (result.error) {
        std::cerr << "replay error: " << *result.error << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"proactive service runtime: scenario replay and golden-trace tooling"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string config_path;
    std::string trace_out;

    auto* run = app.add_subcommand("run", "replay a scenario and emit its trace");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--config", config_path, "run configuration JSON");
    run->add_option("--trace-out", trace_out, "write the trace to a file instead of stdout");

    auto* compare = app.add_subcommand("compare", "replay and diff against the scenario's golden trace");
    compare->add_option("scenario", scenario_path, "scenario JSON file")->required();
    compare->add_option("--config", config_path, "run configuration JSON");

    auto* record = app.add_subcommand("record-golden", "replay and overwrite the scenario's golden trace");
    record->add_option("scenario", scenario_path, "scenario JSON file")->required();
    record->add_option("--config", config_path, "run configuration JSON");

    auto* validate = app.add_subcommand("validate-fixtures", "check a scenario and its fixture files");
    validate->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_and_emit(scenario_path, config_path, trace_out);
        }
        if (compare->parsed()) {
            const auto scenario = alpha::load_scenario(scenario_path);
            if (scenario.expected.empty()) {
                std::cerr << "scenario has no expected golden trace path\n";
                return 2;
            }
            const auto config = resolve_config(scenario_path, config_path);
            const auto result = alpha::replay(scenario, config);
            if (result.error) {
                std::cerr << "replay error: " << *result.error << "\n";
                return 1;
            }
            const auto diff = alpha::compare_trace(result.trace, scenario.expected);
            std::cout << diff.summary << "\n";
            return diff.identical ? 0 : 1;
        }
        if (record->parsed()) {
            const auto scenario = alpha::load_scenario(scenario_path);
            if (scenario.expected.empty()) {
                std::cerr << "scenario has no expected golden trace path\n";
                return 2;
            }
            const auto config = resolve_config(scenario_path, config_path);
            const auto result = alpha::replay(scenario, config);
            if (result.error) {
                std::cerr << "replay error: " << *result.error << "\n";
                return 1;
            }
            std::ofstream out(scenario.expected, std::ios::trunc);
            out << result.trace.serialize();
            std::cout << "recorded " << result.trace.entries.size() << " entries to "
                      << scenario.expected << "\n";
            return 0;
        }
        if (validate->parsed()) {
            const auto scenario = alpha::load_scenario(scenario_path);
            (void)alpha::PromptPack::load(scenario.prompt_pack);
            (void)alpha::ScriptedBackend::load(scenario.model_fixtures);
            (void)alpha::FixtureSearchProvider::load(scenario.search_fixtures);
            std::cout << "ok: " << scenario.name << " (" << scenario.events.size()
                      << " events)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
