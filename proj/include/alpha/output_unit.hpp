#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "alpha/backend.hpp"
#include "alpha/types.hpp"

namespace alpha {

class DeliverySink {
public:
    virtual ~DeliverySink() = default;
    virtual const std::string& id() const = 0;
    virtual DeliveryReceipt deliver(const ActionInstruction& instruction, double t) = 0;
    // Ends any in-progress delivery; returns whether one was in progress.
    virtual bool interrupt() = 0;
};

// Appends "[<t with 3 decimals>] <text>" per delivery. Deliveries are
// instantaneous; interrupt never finds one in progress.
class TextLogSink : public DeliverySink {
public:
    explicit TextLogSink(double rate_chars_per_second);

    const std::string& id() const override;
    DeliveryReceipt deliver(const ActionInstruction& instruction, double t) override;
    bool interrupt() override;

    const std::vector<std::string>& lines() const { return lines_; }
    const std::vector<DeliveryReceipt>& receipts() const { return receipts_; }

private:
    double rate_;
    std::vector<std::string> lines_;
    std::vector<DeliveryReceipt> receipts_;
};

// Models speech duration as chars/rate; a delivery stays in progress until
// the next deliver call or an interrupt.
class ModeledSpeechSink : public DeliverySink {
public:
    explicit ModeledSpeechSink(double rate_chars_per_second);

    const std::string& id() const override;
    DeliveryReceipt deliver(const ActionInstruction& instruction, double t) override;
    bool interrupt() override;

    std::vector<DeliveryReceipt> receipts() const;

private:
    double rate_;
    std::vector<DeliveryReceipt> receipts_;
    std::optional<std::size_t> active_;
    mutable std::mutex mu_;
};

ModelRequest build_condense_request(const PromptPack& pack, const DraftResponse& draft);

// First sentence of text: cut at the first terminal punctuation {., !, ?}
// followed by whitespace or end, or at the first line break.
std::string first_sentence(const std::string& text);

// Two-stage delivery, stage one: Brief condenses via the backend and keeps
// only the first sentence; Full passes the draft through; Silent is empty.
ActionInstruction condense(const DraftResponse& draft, const ModelBackend& backend,
                           const PromptPack& pack, Verbosity verbosity);

} // namespace alpha
