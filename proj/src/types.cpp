#include "alpha/types.hpp"

#include "alpha/errors.hpp"

namespace alpha {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::FrameDescription: return "FrameDescription";
        case EventKind::SpeechUtterance: return "SpeechUtterance";
        case EventKind::Tick: return "Tick";
    }
    return "?";
}

const char* to_string(Source s) {
    switch (s) {
        case Source::Frame: return "Frame";
        case Source::Speech: return "Speech";
    }
    return "?";
}

const char* to_string(TriggerCause c) {
    switch (c) {
        case TriggerCause::UserCommand: return "UserCommand";
        case TriggerCause::IntentChange: return "IntentChange";
        case TriggerCause::ScheduledTimer: return "ScheduledTimer";
    }
    return "?";
}

const char* to_string(SubTaskTarget t) {
    switch (t) {
        case SubTaskTarget::DirectAnswer: return "DirectAnswer";
        case SubTaskTarget::ScheduleTrigger: return "ScheduleTrigger";
        case SubTaskTarget::DescribeScene: return "DescribeScene";
        case SubTaskTarget::ToolCall: return "ToolCall";
        case SubTaskTarget::MemoryRetrieve: return "MemoryRetrieve";
    }
    return "?";
}

const char* to_string(SubTaskStatus s) {
    switch (s) {
        case SubTaskStatus::Ok: return "Ok";
        case SubTaskStatus::Failed: return "Failed";
        case SubTaskStatus::Skipped: return "Skipped";
    }
    return "?";
}

const char* to_string(Verbosity v) {
    switch (v) {
        case Verbosity::Brief: return "Brief";
        case Verbosity::Full: return "Full";
        case Verbosity::Silent: return "Silent";
    }
    return "?";
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "FrameDescription") return EventKind::FrameDescription;
    if (s == "SpeechUtterance") return EventKind::SpeechUtterance;
    if (s == "Tick") return EventKind::Tick;
    throw ParseError("unknown event kind: " + s);
}

SubTaskTarget subtask_target_from_string(const std::string& s) {
    if (s == "DirectAnswer") return SubTaskTarget::DirectAnswer;
    if (s == "ScheduleTrigger") return SubTaskTarget::ScheduleTrigger;
    if (s == "DescribeScene") return SubTaskTarget::DescribeScene;
    if (s == "ToolCall") return SubTaskTarget::ToolCall;
    if (s == "MemoryRetrieve") return SubTaskTarget::MemoryRetrieve;
    throw MalformedPlan("unknown sub-task target: " + s);
}

} // namespace alpha
