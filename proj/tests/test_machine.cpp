#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "alpha/machine.hpp"
#include "helpers.hpp"

using namespace alpha;
using testutil::LambdaBackend;

namespace {

// A complete, well-behaved model for pipeline tests, keyed by prompt id.
std::string scripted_model(const ModelRequest& r) {
    if (r.prompt_id.rfind("describe.", 0) == 0) return "[Visual Description] the scene in focus";
    if (r.prompt_id == "cpu.classify")
        return "Service: Test Service\nReasoning: the scene changed";
    if (r.prompt_id == "cpu.decompose") return "ToolCall: q";
    if (r.prompt_id == "alu.decide") return "web_search(\"q\")";
    if (r.prompt_id == "cpu.synthesize") return "Draft sentence one. Draft sentence two.";
    if (r.prompt_id == "output.condense") return "Do the one thing. And ignore this.";
    if (r.prompt_id == "memory.record") return "Summary: helped once\nTopic: test topic";
    if (r.prompt_id == "cpu.direct") return "direct answer text";
    throw Error("unexpected prompt id: " + r.prompt_id);
}

struct Rig {
    PromptPack pack = testutil::minimal_pack();
    LambdaBackend backend;
    FixtureSearchProvider provider;
    ToolRegistry tools;
    MemoryStore store{testutil::temp_path("machine-store")};
    TextLogSink sink{20.0};
    SessionClock clock;
    RunConfig config;

    explicit Rig(LambdaBackend::Fn fn = scripted_model) : backend(std::move(fn)) {
        nlohmann::json j;
        j["q"] = {{{"topic", "t"}, {"summary", "s"}, {"snippets", "n"}, {"link", "https://a/"}}};
        provider = FixtureSearchProvider::from_json(j);
        tools.register_tool(make_web_search_tool(provider, 3));
        config.policy.predicate = ChangePredicate::NumericCountChange;
        config.policy.cooldown = 3.0;
    }

    Machine machine(const std::string& id = "test-session") {
        MachineDeps deps;
        deps.trigger_backend = &backend;
        deps.streaming_backend = &backend;
        deps.orchestrator_backend = &backend;
        deps.pack = &pack;
        deps.search = &provider;
        deps.tools = &tools;
        deps.store = &store;
        deps.sink = &sink;
        deps.clock = &clock;
        return Machine(id, config, deps);
    }
};

std::vector<std::string> labels(const std::vector<TraceEntry>& entries) {
    std::vector<std::string> out;
    for (const auto& e : entries) out.push_back(e.label);
    return out;
}

} // namespace

TEST_CASE("a fired trigger runs the full exchange pipeline") {
    Rig rig;
    Machine machine = rig.machine();

    machine.step({0.0, EventKind::FrameDescription, "an empty table"});
    const auto outcome = machine.step({1.0, EventKind::FrameDescription, "now 1 card"});

    REQUIRE(outcome.trigger.has_value());
    CHECK(outcome.trigger->cause == TriggerCause::IntentChange);
    REQUIRE(outcome.response.has_value());
    CHECK(outcome.response->service_name == "Test Service");
    CHECK(outcome.response->instruction.text == "Do the one thing.");

    CHECK(labels(outcome.trace) ==
          std::vector<std::string>{"ingest", "trigger.fired", "describe", "classify", "decompose",
                                   "decide", "search", "subtask", "retrieve", "subtask",
                                   "synthesize.prompt", "synthesize", "condense", "deliver",
                                   "write", "flush"});

    CHECK(rig.store.flushed_count() == 1);
    REQUIRE(rig.sink.lines().size() == 1);
    CHECK(rig.sink.lines()[0] == "[1.000] Do the one thing.");

    // the deliver body carries the sink id and the modeled end time
    const auto& deliver = outcome.trace[13];
    CHECK(deliver.body.rfind("text-log | end=", 0) == 0);
    CHECK(deliver.body.find("| Do the one thing.") != std::string::npos);
}

TEST_CASE("triggers inside the cooldown window are suppressed with a reason") {
    Rig rig;
    Machine machine = rig.machine();
    machine.step({0.0, EventKind::FrameDescription, "nothing"});
    machine.step({1.0, EventKind::FrameDescription, "card 1"});
    const auto outcome = machine.step({2.0, EventKind::FrameDescription, "cards 1 2"});

    REQUIRE(outcome.trace.size() == 2);
    CHECK(outcome.trace[1].label == "trigger.suppressed");
    CHECK(outcome.trace[1].body.rfind("cooldown | ", 0) == 0);
    CHECK_FALSE(outcome.response.has_value());
    CHECK(machine.state().exchange_log.back().suppression_reason == "cooldown");

    // and at exactly the cooldown boundary the next trigger fires again
    const auto later = machine.step({4.0, EventKind::FrameDescription, "cards 1 2 3"});
    CHECK(later.response.has_value());
}

TEST_CASE("events older than session time are stale") {
    Rig rig;
    Machine machine = rig.machine();
    machine.step({5.0, EventKind::Tick, ""});
    CHECK_THROWS_AS(machine.step({4.0, EventKind::FrameDescription, "late frame"}), StaleEvent);
    CHECK_NOTHROW(machine.step({5.0, EventKind::Tick, ""})); // same instant is fine
}

TEST_CASE("timers must be scheduled strictly in the future") {
    Rig rig;
    Machine machine = rig.machine();
    machine.step({5.0, EventKind::Tick, ""});
    CHECK_THROWS_AS(machine.schedule_timer(5.0, "now"), InvalidTime);
    CHECK_THROWS_AS(machine.schedule_timer(4.0, "past"), InvalidTime);
    CHECK_NOTHROW(machine.schedule_timer(6.0, "future"));
}

TEST_CASE("due timers fire in order before the observation is considered") {
    Rig rig;
    rig.config.policy.cooldown = 0.0; // both timers run their exchanges
    Machine machine = rig.machine();
    machine.step({0.0, EventKind::FrameDescription, "an empty table"});
    machine.schedule_timer(2.5, "second check");
    machine.schedule_timer(2.0, "first check"); // inserted before despite later call

    const auto outcome = machine.step({3.0, EventKind::Tick, ""});
    const auto seen = labels(outcome.trace);
    REQUIRE(seen.size() > 3);
    CHECK(seen[0] == "ingest");
    CHECK(seen[1] == "timer.fired");
    CHECK(outcome.trace[1].body == "2 | first check");
    // the second timer fires after the first exchange completes
    std::size_t second = 0;
    for (std::size_t i = 2; i < seen.size(); ++i) {
        if (seen[i] == "timer.fired") second = i;
    }
    REQUIRE(second > 1);
    CHECK(outcome.trace[second].body == "2.5 | second check");
    CHECK(outcome.trigger->cause == TriggerCause::ScheduledTimer);
    CHECK(rig.store.flushed_count() == 2);
}

TEST_CASE("with a nonzero cooldown the second same-tick timer is suppressed") {
    Rig rig; // cooldown 3.0
    Machine machine = rig.machine();
    machine.step({0.0, EventKind::FrameDescription, "an empty table"});
    machine.schedule_timer(2.0, "first check");
    machine.schedule_timer(2.5, "second check");

    const auto outcome = machine.step({3.0, EventKind::Tick, ""});
    int fired = 0;
    int suppressed = 0;
    for (const auto& e : outcome.trace) {
        if (e.label == "trigger.fired") ++fired;
        if (e.label == "trigger.suppressed") ++suppressed;
    }
    CHECK(fired == 1);
    CHECK(suppressed == 1);
}

TEST_CASE("a failing scene description degrades to the trigger preliminary") {
    Rig rig([](const ModelRequest& r) -> std::string {
        if (r.prompt_id.rfind("describe.", 0) == 0) throw Error("camera offline");
        return scripted_model(r);
    });
    Machine machine = rig.machine();
    machine.step({0.0, EventKind::FrameDescription, "an empty table"});
    const auto outcome = machine.step({1.0, EventKind::FrameDescription, "now 1 card"});

    const auto seen = labels(outcome.trace);
    CHECK(std::count(seen.begin(), seen.end(), "describe.error") == 1);
    REQUIRE(outcome.response.has_value()); // the exchange still completed
    CHECK(outcome.response->instruction.text == "Do the one thing.");
}

TEST_CASE("a classification failure aborts the session with a partial trace") {
    Rig rig([](const ModelRequest& r) -> std::string {
        if (r.prompt_id == "cpu.classify") return "not labeled at all";
        return scripted_model(r);
    });
    Machine machine = rig.machine();
    const auto result = machine.run_session({{0.0, EventKind::FrameDescription, "empty"},
                                             {1.0, EventKind::FrameDescription, "card 1"},
                                             {2.0, EventKind::FrameDescription, "never reached"}});
    REQUIRE(result.error.has_value());
    const auto seen = labels(result.trace.entries);
    CHECK(std::count(seen.begin(), seen.end(), "classify.error") == 1);
    CHECK(std::count(seen.begin(), seen.end(), "ingest") == 2); // third event not processed
}

TEST_CASE("the observation window is bounded by window_len") {
    Rig rig;
    rig.config.window_len = 3;
    Machine machine = rig.machine();
    for (int i = 0; i < 6; ++i) {
        machine.step({static_cast<double>(i), EventKind::FrameDescription,
                      "frame without digits " + std::string(1, static_cast<char>('a' + i))});
    }
    CHECK(machine.state().window.size() == 3);
    CHECK(machine.state().window.front().t == 3.0);
}

TEST_CASE("run_session flushes memory at close") {
    Rig rig;
    Machine machine = rig.machine();
    const auto result = machine.run_session({{0.0, EventKind::Tick, ""}});
    REQUIRE_FALSE(result.error.has_value());
    REQUIRE_FALSE(result.trace.entries.empty());
    const auto& last = result.trace.entries.back();
    CHECK(last.label == "flush");
    CHECK(last.body == "0");
}
