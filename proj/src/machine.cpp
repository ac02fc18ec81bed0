#include "alpha/machine.hpp"

#include <algorithm>
#include <cmath>

#include "alpha/errors.hpp"

namespace alpha {

Machine::Machine(std::string session_id, const RunConfig& config, MachineDeps deps)
    : config_(config), deps_(deps) {
    state_.session_id = std::move(session_id);
    config_.validate();
}

void Machine::add_trace(Unit unit, std::string label, std::string body) {
    trace_.push_back({state_.now, seq_++, unit, std::move(label), std::move(body)});
}

void Machine::schedule_timer(double fire_t, const std::string& purpose) {
    if (fire_t <= state_.now) {
        throw InvalidTime("timer fire_t must be after the session's current time");
    }
    auto pos = std::upper_bound(state_.pending_timers.begin(), state_.pending_timers.end(), fire_t,
                                [](double t, const auto& timer) { return t < timer.first; });
    state_.pending_timers.insert(pos, {fire_t, purpose});
}

UnitHandles Machine::make_handles() {
    UnitHandles handles;

    handles.handlers[SubTaskTarget::DescribeScene] = [this](const SubTask& st) {
        const VisualDescription desc = describe_scene(*deps_.streaming_backend, *deps_.pack,
                                                      state_.window, config_.describe_prompt_id,
                                                      st.payload);
        return SubTaskOutput{desc.text, {{Unit::Input, "describe", desc.text}}};
    };

    handles.handlers[SubTaskTarget::ToolCall] = [this](const SubTask& st) {
        SubTaskOutput out;
        const SearchDecision decision = decide(st.payload, *deps_.orchestrator_backend, *deps_.pack);
        if (decision.kind == SearchDecision::Kind::Answer) {
            out.notes.push_back({Unit::ALU, "decide", "answer: " + decision.text});
            out.content = decision.text;
            return out;
        }
        out.notes.push_back({Unit::ALU, "decide", "search: " + decision.text});
        out.content = deps_.tools->invoke({"web_search", decision.text});
        out.notes.push_back({Unit::ALU, "search", out.content});
        return out;
    };

    handles.handlers[SubTaskTarget::ScheduleTrigger] = [this](const SubTask& st) {
        // payload names a relative delay as "+<seconds>"
        const auto plus = st.payload.find('+');
        if (plus == std::string::npos) {
            throw Error("ScheduleTrigger payload without a +<seconds> delay: " + st.payload);
        }
        const double delay = std::stod(st.payload.substr(plus + 1));
        const double fire_t = state_.now + delay;
        schedule_timer(fire_t, st.payload);
        const std::string body = "timer at " + format_seconds(fire_t) + " | " + st.payload;
        return SubTaskOutput{body, {{Unit::Input, "timer.scheduled", body}}};
    };

    handles.handlers[SubTaskTarget::DirectAnswer] = [this](const SubTask& st) {
        const ModelRequest request{"cpu.direct",
                                   {{Role::System, deps_.pack->get("cpu.direct")},
                                    {Role::User, st.payload}}};
        const std::string answer = deps_.orchestrator_backend->complete(request).text;
        return SubTaskOutput{answer, {{Unit::CPU, "direct", answer}}};
    };

    if (config_.personalization) {
        handles.handlers[SubTaskTarget::MemoryRetrieve] = [this](const SubTask& st) {
            const MemoryQuery query{tokenize(st.payload), config_.memory_k};
            const auto records = deps_.store->retrieve(query);
            std::string content = inject("", records, config_.injection_budget);
            const auto b = content.find_first_not_of("\n");
            content = (b == std::string::npos) ? "" : content.substr(b);
            if (content.empty()) content = "(no relevant memories)";
            return SubTaskOutput{content, {{Unit::Memory, "retrieve", content}}};
        };
    }

    return handles;
}

void Machine::gate_and_run(const TriggerSignal& signal, StepOutcome& outcome) {
    if (state_.last_trigger_t && signal.t - *state_.last_trigger_t < config_.policy.cooldown) {
        add_trace(Unit::Input, "trigger.suppressed", "cooldown | " + signal.preliminary);
        state_.exchange_log.push_back({signal, std::nullopt, "cooldown"});
        return;
    }
    add_trace(Unit::Input, "trigger.fired",
              std::string(to_string(signal.cause)) + " | " + signal.preliminary);
    state_.last_trigger_t = signal.t;
    if (!outcome.trigger) outcome.trigger = signal;
    run_exchange(signal, outcome);
}

void Machine::run_exchange(const TriggerSignal& signal, StepOutcome& outcome) {
    VisualDescription description;
    if (state_.window.empty()) {
        description = {signal.t, signal.preliminary, config_.describe_prompt_id};
        add_trace(Unit::Input, "describe", description.text);
    } else {
        try {
            description = describe_scene(*deps_.streaming_backend, *deps_.pack, state_.window,
                                         config_.describe_prompt_id);
            description.t = signal.t; // timer triggers may fire between frames
            add_trace(Unit::Input, "describe", description.text);
        } catch (const Error& e) {
            // degrade to the trigger-side sketch; the exchange stays alive
            add_trace(Unit::Input, "describe.error", e.what());
            description = {signal.t, signal.preliminary, config_.describe_prompt_id};
        }
    }

    ServiceProposal proposal;
    try {
        proposal = classify(signal, description, *deps_.orchestrator_backend, *deps_.pack);
    } catch (const Error& e) {
        add_trace(Unit::CPU, "classify.error", e.what());
        throw;
    }
    add_trace(Unit::CPU, "classify", proposal.service_name + " | " + proposal.reasoning);

    std::string context;
    for (const auto& obs : state_.window) {
        if (!context.empty()) context += '\n';
        context += obs.text;
    }
    const DispatchPlan plan = decompose(proposal, context, config_.personalization,
                                        *deps_.orchestrator_backend, *deps_.pack);
    add_trace(Unit::CPU, "decompose", render_plan(plan));

    std::vector<std::vector<UnitNote>> notes;
    const auto results = execute_plan(plan, make_handles(), true, &notes);
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (const auto& note : notes[i]) {
            add_trace(note.unit, note.label, note.body);
        }
        add_trace(Unit::CPU, "subtask",
                  "#" + std::to_string(results[i].subtask_id) + " " +
                      to_string(plan.subtasks[i].target) + " " + to_string(results[i].status));
    }

    std::string synth_prompt;
    const DraftResponse draft = synthesize(plan, description, results,
                                           *deps_.orchestrator_backend, *deps_.pack, &synth_prompt);
    add_trace(Unit::CPU, "synthesize.prompt", synth_prompt);
    add_trace(Unit::CPU, "synthesize", draft.text);

    const ActionInstruction instruction =
        condense(draft, *deps_.orchestrator_backend, *deps_.pack, config_.verbosity);
    add_trace(Unit::Output, "condense", instruction.text);

    ServiceResponse response{signal.t, proposal.service_name, draft.text, instruction,
                             draft.provenance};
    try {
        const DeliveryReceipt receipt = deps_.sink->deliver(instruction, signal.t);
        add_trace(Unit::Output, "deliver",
                  receipt.sink_id + " | end=" + format_seconds(receipt.t_end) + " | " +
                      instruction.text);
    } catch (const SinkFailure& e) {
        add_trace(Unit::Output, "deliver.error", e.what());
    }

    state_.exchange_log.push_back({signal, response, ""});
    if (!outcome.response) outcome.response = response;

    if (!response.full_text.empty()) {
        const Exchange exchange{signal, proposal, response};
        const MemoryRecord record =
            build_record(exchange, config_.user_id, config_.user_role,
                         *deps_.orchestrator_backend, *deps_.pack, *deps_.clock, *deps_.store);
        deps_.store->write(record);
        add_trace(Unit::Memory, "write", record.topic + " | " + record.summary);
        const std::size_t flushed = deps_.store->flush();
        add_trace(Unit::Memory, "flush", std::to_string(flushed));
    }
}

StepOutcome Machine::step(const Event& event) {
    if (event.t < state_.now) {
        throw StaleEvent("event at " + format_seconds(event.t) + " is older than session time " +
                         format_seconds(state_.now));
    }
    state_.now = event.t;
    if (deps_.clock != nullptr) deps_.clock->set_session_time(event.t);

    StepOutcome outcome;
    const std::size_t trace_start = trace_.size();

    add_trace(Unit::Input, "ingest",
              event.kind == EventKind::Tick ? "(tick)" : event.payload);

    // due timers fire in fire_t order before the new observation is considered
    while (!state_.pending_timers.empty() && state_.pending_timers.front().first <= event.t) {
        const auto [fire_t, purpose] = state_.pending_timers.front();
        state_.pending_timers.erase(state_.pending_timers.begin());
        add_trace(Unit::Input, "timer.fired", format_seconds(fire_t) + " | " + purpose);
        gate_and_run({event.t, TriggerCause::ScheduledTimer, purpose}, outcome);
    }

    if (auto obs = ingest(event)) {
        auto signal = detect_trigger(config_.policy, state_.window, *obs,
                                     deps_.trigger_backend, deps_.pack);
        state_.window.push_back(*obs);
        while (state_.window.size() > config_.window_len) {
            state_.window.pop_front();
        }
        if (signal) {
            gate_and_run(*signal, outcome);
        }
    }

    outcome.trace.assign(trace_.begin() + static_cast<std::ptrdiff_t>(trace_start), trace_.end());
    return outcome;
}

RunResult Machine::run_session(const std::vector<Event>& events) {
    RunResult result;
    try {
        for (const auto& event : events) {
            step(event);
        }
        const std::size_t flushed = deps_.store->flush(); // session close
        add_trace(Unit::Memory, "flush", std::to_string(flushed));
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    result.trace.entries = trace_;
    return result;
}

} // namespace alpha
