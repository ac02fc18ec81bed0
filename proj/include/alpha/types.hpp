#pragma once

#include <string>
#include <vector>

namespace alpha {

enum class EventKind { FrameDescription, SpeechUtterance, Tick };

// One timestamped item from the perception stream. t is seconds since
// session start; payload is empty only for Tick.
struct Event {
    double t = 0.0;
    EventKind kind = EventKind::Tick;
    std::string payload;
};

enum class Source { Frame, Speech };

struct Observation {
    double t = 0.0;
    std::string text;
    Source source = Source::Frame;
};

enum class TriggerCause { UserCommand, IntentChange, ScheduledTimer };

struct TriggerSignal {
    double t = 0.0;
    TriggerCause cause = TriggerCause::IntentChange;
    std::string preliminary; // trigger-side scene sketch passed to the CPU
};

struct VisualDescription {
    double t = 0.0;
    std::string text;
    std::string prompt_id;
};

struct ServiceProposal {
    double t = 0.0;
    std::string service_name;
    std::string reasoning;
};

enum class SubTaskTarget { DirectAnswer, ScheduleTrigger, DescribeScene, ToolCall, MemoryRetrieve };

struct SubTask {
    int id = 0; // unique, contiguous from 1 within a plan
    SubTaskTarget target = SubTaskTarget::DirectAnswer;
    std::string payload;
};

struct DispatchPlan {
    ServiceProposal proposal;
    std::vector<SubTask> subtasks;
};

enum class SubTaskStatus { Ok, Failed, Skipped };

struct SubTaskResult {
    int subtask_id = 0;
    SubTaskStatus status = SubTaskStatus::Skipped;
    std::string content;
};

struct DraftResponse {
    std::string text;
    std::vector<int> provenance; // subtask ids with status Ok
};

enum class Verbosity { Brief, Full, Silent };

struct ActionInstruction {
    std::string text; // single sentence for Brief, empty for Silent
    Verbosity verbosity = Verbosity::Brief;
};

struct ServiceResponse {
    double t = 0.0;
    std::string service_name;
    std::string full_text;
    ActionInstruction instruction;
    std::vector<int> provenance;
};

struct DeliveryReceipt {
    std::string sink_id;
    double t_start = 0.0;
    double t_end = 0.0;
    bool interrupted = false;
};

const char* to_string(EventKind k);
const char* to_string(Source s);
const char* to_string(TriggerCause c);
const char* to_string(SubTaskTarget t);
const char* to_string(SubTaskStatus s);
const char* to_string(Verbosity v);

EventKind event_kind_from_string(const std::string& s);
SubTaskTarget subtask_target_from_string(const std::string& s); // throws MalformedPlan

} // namespace alpha
