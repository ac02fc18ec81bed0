// Regenerates model_fixtures.json for the bundled scenarios.
//
// Responses are authored here as (prompt_id, content substring) -> text rules.
// A recording backend replays each scenario with those rules and captures the
// content hash of every request it actually served, so the emitted fixture
// files stay in lockstep with real prompt construction. Rules are matched in
// order; put the most specific substring first.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <vector>

#include <nlohmann/json.hpp>

#include "alpha/scenario.hpp"

namespace {

using alpha::Message;
using alpha::ModelRequest;
using alpha::ModelResponse;

struct Rule {
    std::string prompt_id;
    std::string contains; // substring of the concatenated message contents
    std::string response;
};

class RecordingBackend : public alpha::ModelBackend {
public:
    explicit RecordingBackend(std::vector<Rule> rules) : rules_(std::move(rules)) {}

    ModelResponse complete(const ModelRequest& request) const override {
        std::string joined;
        for (const auto& m : request.messages) joined += m.content;
        for (const auto& rule : rules_) {
            if (rule.prompt_id != request.prompt_id) continue;
            if (joined.find(rule.contains) == std::string::npos) continue;
            std::lock_guard lock(mu_);
            cases_[request.prompt_id][alpha::content_hash(request.messages)] = rule.response;
            return {rule.response, 0.0};
        }
        throw alpha::FixtureMiss("no authoring rule for " + request.prompt_id +
                                 " | content: " + joined.substr(0, 160));
    }

    std::map<std::string, std::map<std::string, std::string>> cases() const {
        std::lock_guard lock(mu_);
        return cases_;
    }

private:
    std::vector<Rule> rules_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::map<std::string, std::string>> cases_;
};

// Fallback texts keyed by prompt id. They keep variant configurations (for
// example personalization toggled off, which changes the synthesis prompt
// hash) running end to end; golden traces still pin the canonical runs.
const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"describe.blackjack", "[Visual Description] General view of the card table."},
        {"describe.museum", "[Visual Description] General view of the gallery."},
        {"describe.retail", "[Visual Description] General view of the store interior."},
        {"cpu.classify",
         "Service: General Assistance\nReasoning: Offering general help for the current scene."},
        {"cpu.decompose", "MemoryRetrieve: recent context"},
        {"cpu.direct", "Here is a direct summary based on the available context."},
        {"cpu.synthesize",
         "Here is general guidance for the current situation. Act on the most recent "
         "observation and ask for details if anything is unclear."},
        {"alu.decide", "I can answer this directly from the scene context."},
        {"output.condense", "Act on the most recent observation."},
        {"memory.record", "Summary: Provided general assistance.\nTopic: general assistance"},
    };
    return d;
}

std::vector<Rule> blackjack_rules() {
    return {
        // scene descriptions: most recent distinctive card first
        {"describe.blackjack", "Focus: player hand details",
         "[Visual Description] Close view of the player's hand: 4 of spades and 2 of spades "
         "for a total of 6 points."},
        {"describe.blackjack", "10 of spades",
         "[Visual Description] The dealer reveals a 10 of spades; the round has concluded and "
         "the player's 15 stands against the dealer's total."},
        {"describe.blackjack", "3 of hearts",
         "[Visual Description] The player's hand shows 2, 4, 6 of spades and 3 of hearts, "
         "totaling 15 points."},
        {"describe.blackjack", "6 of spades",
         "[Visual Description] The player now holds 2, 4, and 6 of spades for a hand totaling "
         "12 points."},
        {"describe.blackjack", "2 of spades",
         "[Visual Description] The player's hand shows a 4 of spades and a 2 of spades, "
         "totaling 6 points against the dealer's upcard."},

        {"cpu.classify", "totaling 6 points",
         "Service: Card Counting Strategy\nReasoning: A fresh blackjack hand has appeared, so "
         "the wearer needs opening strategy guidance."},
        {"cpu.classify", "totaling 12 points",
         "Service: Card Strategy Analysis\nReasoning: The hand changed to 12 points and a "
         "hit-or-stand decision is imminent."},
        {"cpu.classify", "totaling 15 points",
         "Service: Card Counting Strategy\nReasoning: The hand grew to 15 points, so updated "
         "counting and action advice applies."},
        {"cpu.classify", "round has concluded",
         "Service: Game Outcome Analysis and Learning Recommendation\nReasoning: The round is "
         "over, so a retrospective with learning points is more useful than live advice."},

        {"cpu.decompose", "opening strategy guidance",
         "ToolCall: Card counting strategy for blackjack\nDescribeScene: player hand details\n"
         "MemoryRetrieve: blackjack strategy"},
        {"cpu.decompose", "hit-or-stand decision",
         "ToolCall: Multi-deck blackjack strategy\nMemoryRetrieve: blackjack strategy"},
        {"cpu.decompose", "grew to 15 points",
         "ToolCall: Basic card counting techniques for beginners\nMemoryRetrieve: blackjack "
         "strategy"},
        {"cpu.decompose", "retrospective with learning points",
         "DirectAnswer: Review the finished round and recommend what the player should learn."},

        {"alu.decide", "Card counting strategy for blackjack",
         "web_search(\"Card counting strategy for blackjack\")"},
        {"alu.decide", "Multi-deck blackjack strategy",
         "web_search(\"Multi-deck blackjack strategy\")"},
        {"alu.decide", "Basic card counting techniques for beginners",
         "web_search(\"Basic card counting techniques for beginners\")"},

        {"cpu.direct", "Review the finished round",
         "The player stood at 15 while the dealer's 10 completed a winning total. Standing on "
         "15 against a strong upcard is statistically unfavorable; basic strategy recommends "
         "hitting. Practicing hit thresholds against strong dealer upcards would improve "
         "future rounds."},

        {"cpu.synthesize", "opening strategy guidance",
         "With 4 and 2 of spades the hand totals 6, which can never bust on the next card. "
         "Basic strategy says to always hit a hard 6 regardless of the dealer upcard. Keep "
         "the running count going, since low cards leaving the deck favor the player later."},
        {"cpu.synthesize", "hit-or-stand decision",
         "The hand now totals 12 with the 2, 4, and 6 of spades. Against most dealer upcards, "
         "basic strategy dictates hitting a 12 built from low cards. One more card carries "
         "limited bust risk at this total."},
        {"cpu.synthesize", "grew to 15 points",
         "At 15 points the hand sits in stiff territory. Against a strong dealer upcard basic "
         "strategy favors hitting, while against a weak upcard standing is preferred. The "
         "count so far is rich in low cards, which slightly favors taking the hit."},
        {"cpu.synthesize", "retrospective with learning points",
         "The round ended with the dealer's 10 beating the player's 15. Standing on 15 "
         "against a strong upcard was the key mistake, since basic strategy recommends "
         "hitting there. Practice hit thresholds against strong dealer upcards before the "
         "next session."},

        {"output.condense", "never bust",
         "Hit — a hard 6 can never bust, so take another card."},
        {"output.condense", "totals 12",
         "Hit. With a hand totaling 12 (2, 4, and 6), basic Blackjack strategy dictates you "
         "should hit."},
        {"output.condense", "stiff territory",
         "Hit against a strong dealer upcard, but stand if the dealer shows a weak card."},
        {"output.condense", "key mistake",
         "Next time, hit a 15 against a strong dealer upcard instead of standing."},

        {"memory.record", "never bust",
         "Summary: Advised hitting a hard 6 in the opening blackjack hand.\nTopic: blackjack "
         "opening strategy"},
        {"memory.record", "totals 12",
         "Summary: Advised hitting a 12 made of low cards.\nTopic: blackjack hit or stand at "
         "12"},
        {"memory.record", "stiff territory",
         "Summary: Advised hit-or-stand on 15 based on dealer upcard strength.\nTopic: "
         "blackjack stiff hand strategy"},
        {"memory.record", "key mistake",
         "Summary: Round lost standing on 15 against a dealer 10; recommended practicing hit "
         "thresholds.\nTopic: blackjack round review"},
    };
}

std::vector<Rule> museum_rules() {
    return {
        {"describe.museum", "stone plinth",
         "[Visual Description] A black bronze sculpture of a four-headed ram with curved "
         "horns, displayed on a stone plinth in the gallery."},

        {"cpu.classify", "four-headed ram",
         "Service: Guided Tour Explanation\nReasoning: The wearer has stopped at an "
         "unfamiliar bronze artifact and would benefit from curatorial context."},

        {"cpu.decompose", "curatorial context",
         "ToolCall: Four-headed bronze ram sculpture historical significance\nMemoryRetrieve: "
         "museum exhibits"},

        {"alu.decide", "Four-headed bronze ram sculpture historical significance",
         "web_search(\"Four-headed bronze ram sculpture historical significance\")"},

        {"cpu.synthesize", "curatorial context",
         "This is the Four-Ram Square Zun, a late Shang dynasty bronze ritual wine vessel "
         "famed for the four ram heads cast at its shoulders. It was unearthed in Hunan "
         "province and is regarded as a masterpiece of ancient Chinese bronze casting. It "
         "anchors this gallery's survey of ritual bronzes."},

        {"output.condense", "Square Zun",
         "You are looking at the Four-Ram Square Zun, a Shang dynasty bronze ritual vessel "
         "renowned for its four cast ram heads."},

        {"memory.record", "Square Zun",
         "Summary: Explained the Four-Ram Square Zun bronze vessel to the visitor.\nTopic: "
         "museum bronze artifacts"},
    };
}

std::vector<Rule> retail_rules() {
    return {
        {"describe.retail", "sweater cuffs",
         "[Visual Description] The shopper is trying a navy sweater, frowning at sleeve "
         "cuffs that extend past the wrists and tugging at a hem that sits low."},

        {"cpu.classify", "frowning at sleeve cuffs",
         "Service: Fit Advisor\nReasoning: The shopper has dwelled on one sweater and shows "
         "visible uncertainty about its fit."},

        {"cpu.decompose", "uncertainty about its fit",
         "ToolCall: Sweater sizing chart\nMemoryRetrieve: clothing fit preferences"},

        {"alu.decide", "Sweater sizing chart", "web_search(\"Sweater sizing chart\")"},

        {"cpu.synthesize", "uncertainty about its fit",
         "Sleeves past the wrist and a low hem suggest this sweater runs a size large. "
         "Standard sizing charts put cuffs at the wrist bone and the hem at mid-hip. Trying "
         "one size down should resolve both issues."},

        {"output.condense", "runs a size large",
         "Try this sweater one size down — the cuffs and hem show it runs large."},

        {"memory.record", "runs a size large",
         "Summary: Suggested sizing down on a sweater whose cuffs and hem ran large.\nTopic: "
         "sweater fit sizing"},
    };
}

std::vector<Rule> rules_for(const std::string& name) {
    if (name == "blackjack") return blackjack_rules();
    if (name == "museum") return museum_rules();
    if (name == "retail") return retail_rules();
    throw std::runtime_error("no authoring rules for scenario: " + name);
}

int generate(const std::string& scenario_path) {
    namespace fs = std::filesystem;

    // load_scenario insists the fixture file exists, so seed a stub first
    {
        std::ifstream in(scenario_path);
        nlohmann::json j;
        in >> j;
        const auto base = fs::path(scenario_path).parent_path();
        const auto fixture_path = base / j.at("model_fixtures").get<std::string>();
        if (!fs::exists(fixture_path)) {
            std::ofstream stub(fixture_path);
            stub << "{}\n";
        }
    }

    const auto scenario = alpha::load_scenario(scenario_path);
    const auto config_path =
        (fs::path(scenario_path).parent_path() / "config.json").string();
    const auto config = alpha::load_config(config_path);

    RecordingBackend recorder(rules_for(scenario.name));
    alpha::ReplayHooks hooks;
    hooks.backend_override = &recorder;
    const auto result = alpha::replay(scenario, config, hooks);
    if (result.error) {
        std::cerr << scenario.name << ": replay failed: " << *result.error << "\n";
        return 1;
    }

    nlohmann::ordered_json out;
    auto recorded = recorder.cases();
    for (const auto& [prompt_id, text] : defaults()) {
        out[prompt_id]["default"] = text;
        out[prompt_id]["cases"] = nlohmann::ordered_json::object();
    }
    for (const auto& [prompt_id, cases] : recorded) {
        for (const auto& [hash, text] : cases) {
            out[prompt_id]["cases"][hash] = text;
        }
    }

    std::ofstream file(scenario.model_fixtures, std::ios::trunc);
    file << out.dump(2) << "\n";
    std::cout << scenario.name << ": wrote " << scenario.model_fixtures << " ("
              << result.trace.entries.size() << " trace entries)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixtures <scenario.json>...\n";
        return 2;
    }
    try {
        for (int i = 1; i < argc; ++i) {
            if (int rc = generate(argv[i]); rc != 0) return rc;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
