#include "alpha/output_unit.hpp"

#include "alpha/errors.hpp"
#include "alpha/trace.hpp"

namespace alpha {

namespace {

const std::string kTextLogId = "text-log";
const std::string kModeledSpeechId = "modeled-speech";

bool is_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

} // namespace

TextLogSink::TextLogSink(double rate_chars_per_second) : rate_(rate_chars_per_second) {}

const std::string& TextLogSink::id() const { return kTextLogId; }

DeliveryReceipt TextLogSink::deliver(const ActionInstruction& instruction, double t) {
    if (instruction.verbosity == Verbosity::Silent) {
        DeliveryReceipt receipt{kTextLogId, t, t, false};
        receipts_.push_back(receipt);
        return receipt;
    }
    lines_.push_back("[" + format_seconds3(t) + "] " + instruction.text);
    DeliveryReceipt receipt{kTextLogId, t,
                            t + static_cast<double>(instruction.text.size()) / rate_, false};
    receipts_.push_back(receipt);
    return receipt;
}

bool TextLogSink::interrupt() { return false; }

ModeledSpeechSink::ModeledSpeechSink(double rate_chars_per_second) : rate_(rate_chars_per_second) {}

const std::string& ModeledSpeechSink::id() const { return kModeledSpeechId; }

DeliveryReceipt ModeledSpeechSink::deliver(const ActionInstruction& instruction, double t) {
    std::lock_guard lock(mu_);
    active_.reset(); // a new delivery completes the previous one
    if (instruction.verbosity == Verbosity::Silent) {
        DeliveryReceipt receipt{kModeledSpeechId, t, t, false};
        receipts_.push_back(receipt);
        return receipt;
    }
    DeliveryReceipt receipt{kModeledSpeechId, t,
                            t + static_cast<double>(instruction.text.size()) / rate_, false};
    receipts_.push_back(receipt);
    active_ = receipts_.size() - 1;
    return receipt;
}

bool ModeledSpeechSink::interrupt() {
    std::lock_guard lock(mu_);
    if (!active_) return false;
    receipts_[*active_].interrupted = true;
    active_.reset();
    return true;
}

std::vector<DeliveryReceipt> ModeledSpeechSink::receipts() const {
    std::lock_guard lock(mu_);
    return receipts_;
}

ModelRequest build_condense_request(const PromptPack& pack, const DraftResponse& draft) {
    return {"output.condense",
            {{Role::System, pack.get("output.condense")}, {Role::User, draft.text}}};
}

std::string first_sentence(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\n\r");
    if (begin == std::string::npos) return "";
    std::string out;
    for (std::size_t i = begin; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            out = text.substr(begin, i - begin);
            break;
        }
        if (is_terminal(c) &&
            (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            out = text.substr(begin, i - begin + 1);
            break;
        }
    }
    if (out.empty()) out = text.substr(begin);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    if (!out.empty() && !is_terminal(out.back())) out += '.';
    return out;
}

ActionInstruction condense(const DraftResponse& draft, const ModelBackend& backend,
                           const PromptPack& pack, Verbosity verbosity) {
    if (verbosity == Verbosity::Silent) {
        return {"", Verbosity::Silent};
    }
    if (draft.text.empty()) {
        throw EmptyCondensation("condense: empty draft");
    }
    if (verbosity == Verbosity::Full) {
        return {draft.text, Verbosity::Full};
    }
    const std::string output = backend.complete(build_condense_request(pack, draft)).text;
    const std::string sentence = first_sentence(output);
    if (sentence.empty()) {
        throw EmptyCondensation("condense: backend produced no sentence");
    }
    return {sentence, Verbosity::Brief};
}

} // namespace alpha
