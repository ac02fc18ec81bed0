#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "alpha/backend.hpp"

namespace testutil {

// Model backend driven by a plain function, for exercising units in isolation.
class LambdaBackend : public alpha::ModelBackend {
public:
    using Fn = std::function<std::string(const alpha::ModelRequest&)>;
    explicit LambdaBackend(Fn fn) : fn_(std::move(fn)) {}

    alpha::ModelResponse complete(const alpha::ModelRequest& request) const override {
        return {fn_(request), 0.0};
    }

private:
    Fn fn_;
};

inline alpha::PromptPack minimal_pack() {
    nlohmann::json j = {
        {"describe.blackjack", "Describe the scene."},
        {"cpu.classify", "Classify."},
        {"cpu.decompose", "Decompose."},
        {"cpu.synthesize", "Synthesize."},
        {"cpu.direct", "Answer directly."},
        {"alu.decide", "Decide."},
        {"output.condense", "Condense."},
        {"memory.record", "Record."},
        {"trigger.test", "Trigger?"},
    };
    return alpha::PromptPack::from_json(j);
}

// Unique temp file path; the file is not created.
inline std::string temp_path(const std::string& stem) {
    static std::mt19937_64 rng(std::random_device{}());
    const auto dir = std::filesystem::temp_directory_path() / "alpha-tests";
    std::filesystem::create_directories(dir);
    return (dir / (stem + "-" + std::to_string(rng()) + ".tmp")).string();
}

} // namespace testutil
