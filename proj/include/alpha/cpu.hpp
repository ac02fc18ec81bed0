#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "alpha/backend.hpp"
#include "alpha/trace.hpp"
#include "alpha/types.hpp"

namespace alpha {

ModelRequest build_classify_request(const PromptPack& pack, const VisualDescription& description);

// Labeled-line completion "Service: <name>\nReasoning: <text>".
ServiceProposal classify(const TriggerSignal& trigger, const VisualDescription& description,
                         const ModelBackend& backend, const PromptPack& pack);

// "TARGET: payload" per line; unknown targets rejected.
std::vector<SubTask> parse_plan(const std::string& text);

std::string render_plan(const DispatchPlan& plan);

ModelRequest build_decompose_request(const PromptPack& pack, const ServiceProposal& proposal,
                                     const std::string& context);

// With personalization on, a MemoryRetrieve sub-task is appended when absent
// (except to DirectAnswer-only plans, whose exclusivity invariant wins).
DispatchPlan decompose(const ServiceProposal& proposal, const std::string& context,
                       bool personalization, const ModelBackend& backend,
                       const PromptPack& pack);

struct UnitNote {
    Unit unit = Unit::CPU;
    std::string label;
    std::string body;
};

struct SubTaskOutput {
    std::string content;
    std::vector<UnitNote> notes;
};

using SubTaskHandler = std::function<SubTaskOutput(const SubTask&)>;

struct UnitHandles {
    std::map<SubTaskTarget, SubTaskHandler> handlers; // missing target -> Skipped
};

// Dispatches sub-tasks (concurrently when parallel), results merged in plan
// order. A failing sub-task becomes status=Failed; execution never aborts.
std::vector<SubTaskResult> execute_plan(const DispatchPlan& plan, const UnitHandles& units,
                                        bool parallel = true,
                                        std::vector<std::vector<UnitNote>>* notes_out = nullptr);

ModelRequest build_synthesize_request(const PromptPack& pack, const DispatchPlan& plan,
                                      const VisualDescription& description,
                                      const std::vector<SubTaskResult>& results);

// Evidence order in the prompt is fixed: tool results, visual description,
// then memory. prompt_out receives the user prompt for tracing.
DraftResponse synthesize(const DispatchPlan& plan, const VisualDescription& description,
                         const std::vector<SubTaskResult>& results,
                         const ModelBackend& backend, const PromptPack& pack,
                         std::string* prompt_out = nullptr);

} // namespace alpha
