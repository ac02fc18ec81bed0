#pragma once

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alpha/alu.hpp"
#include "alpha/backend.hpp"
#include "alpha/config.hpp"
#include "alpha/cpu.hpp"
#include "alpha/input_unit.hpp"
#include "alpha/memory_store.hpp"
#include "alpha/output_unit.hpp"
#include "alpha/trace.hpp"
#include "alpha/types.hpp"

namespace alpha {

struct ExchangeLogEntry {
    TriggerSignal trigger;
    std::optional<ServiceResponse> response;
    std::string suppression_reason; // empty when the trigger fired
};

struct SessionState {
    std::string session_id;
    double now = 0.0;
    std::deque<Observation> window;
    std::optional<double> last_trigger_t;
    std::vector<std::pair<double, std::string>> pending_timers; // sorted by fire_t
    std::vector<ExchangeLogEntry> exchange_log;
};

struct StepOutcome {
    std::optional<TriggerSignal> trigger;
    std::optional<ServiceResponse> response;
    std::vector<TraceEntry> trace;
};

struct RunResult {
    SessionTrace trace; // complete up to the failure point on error
    std::optional<std::string> error;
};

// External collaborators wired into one session machine. Pointers are not
// owned and must outlive the machine.
struct MachineDeps {
    const ModelBackend* trigger_backend = nullptr;
    const ModelBackend* streaming_backend = nullptr;
    const ModelBackend* orchestrator_backend = nullptr;
    const PromptPack* pack = nullptr;
    const SearchProvider* search = nullptr;
    const ToolRegistry* tools = nullptr;
    MemoryStore* store = nullptr;
    DeliverySink* sink = nullptr;
    SessionClock* clock = nullptr;
};

// The machine loop: Input -> CPU -> {ALU, Memory, Input} -> CPU -> Output,
// strictly sequential per session, with a deterministic trace.
class Machine {
public:
    Machine(std::string session_id, const RunConfig& config, MachineDeps deps);

    StepOutcome step(const Event& event); // StaleEvent, BackendError
    RunResult run_session(const std::vector<Event>& events); // flushes memory at close

    void schedule_timer(double fire_t, const std::string& purpose); // InvalidTime

    const SessionState& state() const { return state_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }

private:
    void add_trace(Unit unit, std::string label, std::string body);
    void gate_and_run(const TriggerSignal& signal, StepOutcome& outcome);
    void run_exchange(const TriggerSignal& signal, StepOutcome& outcome);
    UnitHandles make_handles();

    RunConfig config_;
    MachineDeps deps_;
    SessionState state_;
    std::vector<TraceEntry> trace_;
    std::uint64_t seq_ = 0;
};

} // namespace alpha
