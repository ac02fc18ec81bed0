#include "alpha/cpu.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "alpha/errors.hpp"

namespace alpha {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
}

void validate_plan(const DispatchPlan& plan) {
    int direct_answers = 0;
    for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
        if (plan.subtasks[i].id != static_cast<int>(i) + 1) {
            throw MalformedPlan("sub-task ids must be contiguous from 1");
        }
        if (plan.subtasks[i].target == SubTaskTarget::DirectAnswer) ++direct_answers;
    }
    if (direct_answers > 1 || (direct_answers == 1 && plan.subtasks.size() != 1)) {
        throw MalformedPlan("DirectAnswer must be the only sub-task");
    }
}

} // namespace

ModelRequest build_classify_request(const PromptPack& pack, const VisualDescription& description) {
    return {"cpu.classify",
            {{Role::System, pack.get("cpu.classify")}, {Role::User, description.text}}};
}

ServiceProposal classify(const TriggerSignal& trigger, const VisualDescription& description,
                         const ModelBackend& backend, const PromptPack& pack) {
    if (description.t != trigger.t) {
        throw Error("classify: description/trigger time mismatch");
    }
    const std::string output = backend.complete(build_classify_request(pack, description)).text;

    std::string service;
    std::string reasoning;
    bool in_reasoning = false;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("Service:", 0) == 0) {
            service = trim(line.substr(8));
            in_reasoning = false;
        } else if (line.rfind("Reasoning:", 0) == 0) {
            reasoning = trim(line.substr(10));
            in_reasoning = true;
        } else if (in_reasoning) {
            reasoning += "\n" + line;
        }
    }
    if (service.empty() || reasoning.empty()) {
        throw MalformedProposal("classification output missing Service/Reasoning labels");
    }
    return {trigger.t, service, reasoning};
}

std::vector<SubTask> parse_plan(const std::string& text) {
    std::vector<SubTask> subtasks;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        line = trim(line);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw MalformedPlan("plan line without target: " + line);
        }
        const SubTaskTarget target = subtask_target_from_string(trim(line.substr(0, colon)));
        subtasks.push_back({static_cast<int>(subtasks.size()) + 1, target,
                            trim(line.substr(colon + 1))});
    }
    return subtasks;
}

std::string render_plan(const DispatchPlan& plan) {
    std::string out;
    for (const auto& st : plan.subtasks) {
        if (!out.empty()) out += '\n';
        out += std::string(to_string(st.target)) + ": " + st.payload;
    }
    return out;
}

ModelRequest build_decompose_request(const PromptPack& pack, const ServiceProposal& proposal,
                                     const std::string& context) {
    const std::string body = "Service: " + proposal.service_name + "\nReasoning: " +
                             proposal.reasoning + "\nContext:\n" + context;
    return {"cpu.decompose", {{Role::System, pack.get("cpu.decompose")}, {Role::User, body}}};
}

DispatchPlan decompose(const ServiceProposal& proposal, const std::string& context,
                       bool personalization, const ModelBackend& backend,
                       const PromptPack& pack) {
    const std::string output =
        backend.complete(build_decompose_request(pack, proposal, context)).text;
    DispatchPlan plan{proposal, parse_plan(output)};
    validate_plan(plan);

    if (personalization) {
        const bool direct_only =
            plan.subtasks.size() == 1 && plan.subtasks[0].target == SubTaskTarget::DirectAnswer;
        const bool has_retrieve =
            std::any_of(plan.subtasks.begin(), plan.subtasks.end(), [](const SubTask& st) {
                return st.target == SubTaskTarget::MemoryRetrieve;
            });
        if (!direct_only && !has_retrieve) {
            plan.subtasks.push_back({static_cast<int>(plan.subtasks.size()) + 1,
                                     SubTaskTarget::MemoryRetrieve, proposal.service_name});
        }
    }
    return plan;
}

std::vector<SubTaskResult> execute_plan(const DispatchPlan& plan, const UnitHandles& units,
                                        bool parallel,
                                        std::vector<std::vector<UnitNote>>* notes_out) {
    validate_plan(plan);
    const std::size_t n = plan.subtasks.size();
    std::vector<SubTaskResult> results(n);
    std::vector<std::vector<UnitNote>> notes(n);

    auto run_one = [&](std::size_t i) {
        const SubTask& st = plan.subtasks[i];
        auto it = units.handlers.find(st.target);
        if (it == units.handlers.end()) {
            results[i] = {st.id, SubTaskStatus::Skipped, "no handler"};
            return;
        }
        try {
            SubTaskOutput out = it->second(st);
            if (out.content.empty()) {
                results[i] = {st.id, SubTaskStatus::Failed, "empty sub-task result"};
            } else {
                results[i] = {st.id, SubTaskStatus::Ok, std::move(out.content)};
            }
            notes[i] = std::move(out.notes);
        } catch (const std::exception& e) {
            results[i] = {st.id, SubTaskStatus::Failed, e.what()};
        }
    };

    if (parallel && n > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            futures.push_back(std::async(std::launch::async, run_one, i));
        }
        for (auto& f : futures) f.get(); // merged in plan order regardless of completion
    } else {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
    }

    if (notes_out != nullptr) *notes_out = std::move(notes);
    return results;
}

ModelRequest build_synthesize_request(const PromptPack& pack, const DispatchPlan& plan,
                                      const VisualDescription& description,
                                      const std::vector<SubTaskResult>& results) {
    auto target_of = [&](int id) { return plan.subtasks[static_cast<std::size_t>(id) - 1].target; };

    std::string body = "Service: " + plan.proposal.service_name + "\nReasoning: " +
                       plan.proposal.reasoning + "\nEvidence:\n";
    // fixed priority: tool results, then visual description, then memory
    for (const auto& r : results) {
        if (r.status == SubTaskStatus::Ok && target_of(r.subtask_id) != SubTaskTarget::MemoryRetrieve) {
            body += "[#" + std::to_string(r.subtask_id) + "] " + r.content + "\n";
        }
    }
    body += "[visual] " + description.text + "\n";
    for (const auto& r : results) {
        if (r.status == SubTaskStatus::Ok && target_of(r.subtask_id) == SubTaskTarget::MemoryRetrieve) {
            body += "[#" + std::to_string(r.subtask_id) + "] " + r.content + "\n";
        }
    }
    return {"cpu.synthesize", {{Role::System, pack.get("cpu.synthesize")}, {Role::User, body}}};
}

DraftResponse synthesize(const DispatchPlan& plan, const VisualDescription& description,
                         const std::vector<SubTaskResult>& results,
                         const ModelBackend& backend, const PromptPack& pack,
                         std::string* prompt_out) {
    const ModelRequest request = build_synthesize_request(pack, plan, description, results);
    if (prompt_out != nullptr) {
        *prompt_out = request.messages.back().content;
    }
    const std::string output = backend.complete(request).text;
    if (output.empty()) {
        throw EmptySynthesis("synthesis produced empty text");
    }
    DraftResponse draft{output, {}};
    for (const auto& r : results) {
        if (r.status == SubTaskStatus::Ok) draft.provenance.push_back(r.subtask_id);
    }
    return draft;
}

} // namespace alpha
