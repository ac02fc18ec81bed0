#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "alpha/backend.hpp"
#include "alpha/types.hpp"

namespace alpha {

enum class PolicyMode { RuleBased, ModelBacked };
enum class ChangePredicate { NumericCountChange, Dwell, NovelScene };

struct TriggerPolicy {
    PolicyMode mode = PolicyMode::RuleBased;
    std::vector<std::string> command_markers; // lowercase cues matched in speech
    ChangePredicate predicate = ChangePredicate::NumericCountChange;
    double cooldown = 3.0;
    std::string prompt_id; // ModelBacked trigger prompt
    int dwell_n = 3;
    double jaccard_threshold = 0.2;
};

ChangePredicate change_predicate_from_string(const std::string& s); // ParseError

std::optional<Observation> ingest(const Event& event);

// Predicate helpers, deterministic by construction.
int numeric_token_count(const std::string& text);
std::string dominant_token(const std::string& text); // most frequent token of len >= 4
double jaccard(const std::string& a, const std::string& b);

// Dual "user command + intent" policy without the cooldown gate; the caller
// (or evaluate_trigger) applies cooldown. UserCommand wins ties.
std::optional<TriggerSignal> detect_trigger(const TriggerPolicy& policy,
                                            const std::deque<Observation>& window,
                                            const Observation& new_obs,
                                            const ModelBackend* backend,
                                            const PromptPack* pack);

std::optional<TriggerSignal> evaluate_trigger(const TriggerPolicy& policy,
                                              const std::deque<Observation>& window,
                                              const Observation& new_obs,
                                              std::optional<double> last_trigger_t,
                                              const ModelBackend* backend,
                                              const PromptPack* pack);

ModelRequest build_describe_request(const PromptPack& pack,
                                    const std::deque<Observation>& window,
                                    const std::string& prompt_id,
                                    const std::string& seed = "");

// Fine-grained scene description via the streaming backend; the completion
// must start with "[Visual Description]", which is stripped.
VisualDescription describe_scene(const ModelBackend& backend, const PromptPack& pack,
                                 const std::deque<Observation>& window,
                                 const std::string& prompt_id,
                                 const std::string& seed = "");

} // namespace alpha
