#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <thread>

#include "alpha/cpu.hpp"
#include "helpers.hpp"

using namespace alpha;
using testutil::LambdaBackend;

namespace {

const TriggerSignal kTrigger{5.0, TriggerCause::IntentChange, "something happened"};
const VisualDescription kDesc{5.0, "a detailed scene", "describe.blackjack"};

DispatchPlan plan_of(std::vector<SubTask> subtasks) {
    return {{5.0, "Test Service", "because"}, std::move(subtasks)};
}

} // namespace

TEST_CASE("classify parses labeled Service/Reasoning lines") {
    const auto pack = testutil::minimal_pack();
    LambdaBackend backend([](const ModelRequest& r) {
        CHECK(r.prompt_id == "cpu.classify");
        CHECK(r.messages.back().content == "a detailed scene");
        return "Service: Card Counting Strategy\nReasoning: cards changed\nand the bet grew";
    });
    const auto proposal = classify(kTrigger, kDesc, backend, pack);
    CHECK(proposal.t == 5.0);
    CHECK(proposal.service_name == "Card Counting Strategy");
    CHECK(proposal.reasoning == "cards changed\nand the bet grew");

    LambdaBackend bad([](const ModelRequest&) { return std::string("no labels here"); });
    CHECK_THROWS_AS(classify(kTrigger, kDesc, bad, pack), MalformedProposal);

    const VisualDescription stale{4.0, "old scene", "describe.blackjack"};
    CHECK_THROWS_AS(classify(kTrigger, stale, backend, pack), Error);
}

TEST_CASE("parse_plan and render_plan invert each other") {
    const std::string text =
        "ToolCall: find something\nDescribeScene: the corner\nMemoryRetrieve: old games";
    const auto subtasks = parse_plan(text);
    REQUIRE(subtasks.size() == 3);
    CHECK(subtasks[0].id == 1);
    CHECK(subtasks[0].target == SubTaskTarget::ToolCall);
    CHECK(subtasks[0].payload == "find something");
    CHECK(subtasks[2].id == 3);
    CHECK(render_plan(plan_of(subtasks)) == text);

    CHECK(parse_plan("  \n\n").empty());
    CHECK_THROWS_AS(parse_plan("no colon line"), MalformedPlan);
    CHECK_THROWS_AS(parse_plan("FlyToMoon: now"), MalformedPlan);
}

TEST_CASE("decompose appends MemoryRetrieve per the personalization rule") {
    const auto pack = testutil::minimal_pack();
    const ServiceProposal proposal{5.0, "Test Service", "because"};

    LambdaBackend tool_only([](const ModelRequest& r) {
        CHECK(r.messages.back().content ==
              "Service: Test Service\nReasoning: because\nContext:\nctx line");
        return std::string("ToolCall: find something");
    });
    const auto plan = decompose(proposal, "ctx line", true, tool_only, pack);
    REQUIRE(plan.subtasks.size() == 2);
    CHECK(plan.subtasks[1].target == SubTaskTarget::MemoryRetrieve);
    CHECK(plan.subtasks[1].id == 2);
    CHECK(plan.subtasks[1].payload == "Test Service");

    // no append when personalization is off
    CHECK(decompose(proposal, "ctx line", false, tool_only, pack).subtasks.size() == 1);

    // no duplicate when the model already asked for memory
    LambdaBackend with_memory([](const ModelRequest&) {
        return std::string("ToolCall: x\nMemoryRetrieve: y");
    });
    CHECK(decompose(proposal, "c", true, with_memory, pack).subtasks.size() == 2);

    // DirectAnswer exclusivity beats the append rule
    LambdaBackend direct([](const ModelRequest&) { return std::string("DirectAnswer: just say hi"); });
    const auto direct_plan = decompose(proposal, "c", true, direct, pack);
    REQUIRE(direct_plan.subtasks.size() == 1);
    CHECK(direct_plan.subtasks[0].target == SubTaskTarget::DirectAnswer);

    // DirectAnswer alongside others is malformed
    LambdaBackend mixed([](const ModelRequest&) {
        return std::string("DirectAnswer: hi\nToolCall: also this");
    });
    CHECK_THROWS_AS(decompose(proposal, "c", true, mixed, pack), MalformedPlan);
}

TEST_CASE("execute_plan merges results in plan order despite parallelism") {
    UnitHandles units;
    units.handlers[SubTaskTarget::ToolCall] = [](const SubTask& st) {
        // earlier sub-tasks finish last
        std::this_thread::sleep_for(std::chrono::milliseconds(40 / st.id));
        return SubTaskOutput{"tool-" + std::to_string(st.id), {}};
    };
    const auto plan = plan_of({{1, SubTaskTarget::ToolCall, "a"},
                               {2, SubTaskTarget::ToolCall, "b"},
                               {3, SubTaskTarget::ToolCall, "c"},
                               {4, SubTaskTarget::MemoryRetrieve, "d"}});

    std::vector<std::vector<UnitNote>> notes;
    const auto results = execute_plan(plan, units, true, &notes);
    REQUIRE(results.size() == 4);
    for (int i = 0; i < 3; ++i) {
        CHECK(results[i].subtask_id == i + 1);
        CHECK(results[i].status == SubTaskStatus::Ok);
        CHECK(results[i].content == "tool-" + std::to_string(i + 1));
    }
    // no handler registered for MemoryRetrieve
    CHECK(results[3].status == SubTaskStatus::Skipped);
    CHECK(results[3].content == "no handler");
    CHECK(notes.size() == 4);
}

TEST_CASE("execute_plan converts failures without aborting") {
    UnitHandles units;
    units.handlers[SubTaskTarget::ToolCall] = [](const SubTask& st) -> SubTaskOutput {
        if (st.payload == "boom") throw Error("tool exploded");
        if (st.payload == "empty") return {"", {}};
        return {"fine", {}};
    };
    const auto results = execute_plan(plan_of({{1, SubTaskTarget::ToolCall, "boom"},
                                               {2, SubTaskTarget::ToolCall, "empty"},
                                               {3, SubTaskTarget::ToolCall, "ok"}}),
                                      units, false);
    CHECK(results[0].status == SubTaskStatus::Failed);
    CHECK(results[0].content == "tool exploded");
    CHECK(results[1].status == SubTaskStatus::Failed);
    CHECK(results[2].status == SubTaskStatus::Ok);
}

TEST_CASE("execute_plan validates id contiguity") {
    UnitHandles units;
    CHECK_THROWS_AS(execute_plan(plan_of({{2, SubTaskTarget::ToolCall, "a"}}), units),
                    MalformedPlan);
    CHECK_THROWS_AS(execute_plan(plan_of({{1, SubTaskTarget::ToolCall, "a"},
                                          {3, SubTaskTarget::ToolCall, "b"}}),
                                 units),
                    MalformedPlan);
}

TEST_CASE("synthesize orders evidence as tools, visual, then memory") {
    const auto pack = testutil::minimal_pack();
    const auto plan = plan_of({{1, SubTaskTarget::MemoryRetrieve, "past"},
                               {2, SubTaskTarget::ToolCall, "query"},
                               {3, SubTaskTarget::ToolCall, "failed query"}});
    const std::vector<SubTaskResult> results{{1, SubTaskStatus::Ok, "memory lines"},
                                             {2, SubTaskStatus::Ok, "search results"},
                                             {3, SubTaskStatus::Failed, "miss"}};

    std::string prompt;
    LambdaBackend backend([](const ModelRequest&) { return std::string("draft text"); });
    const auto draft = synthesize(plan, kDesc, results, backend, pack, &prompt);

    CHECK(draft.text == "draft text");
    CHECK(draft.provenance == std::vector<int>{1, 2}); // Ok sub-tasks only
    const auto tool_pos = prompt.find("[#2] search results");
    const auto visual_pos = prompt.find("[visual] a detailed scene");
    const auto memory_pos = prompt.find("[#1] memory lines");
    REQUIRE(tool_pos != std::string::npos);
    REQUIRE(visual_pos != std::string::npos);
    REQUIRE(memory_pos != std::string::npos);
    CHECK(tool_pos < visual_pos);
    CHECK(visual_pos < memory_pos);
    CHECK(prompt.find("miss") == std::string::npos); // failed evidence excluded

    LambdaBackend empty([](const ModelRequest&) { return std::string(); });
    CHECK_THROWS_AS(synthesize(plan, kDesc, results, empty, pack), EmptySynthesis);
}
