#include "alpha/input_unit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "alpha/errors.hpp"
#include "alpha/memory_store.hpp"

namespace alpha {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::set<std::string> token_set(const std::string& text) {
    std::set<std::string> out;
    for (auto& tok : tokenize(text)) out.insert(std::move(tok));
    return out;
}

bool numeric_change(const std::deque<Observation>& window, const Observation& new_obs) {
    const int prev = window.empty() ? 0 : numeric_token_count(window.back().text);
    return numeric_token_count(new_obs.text) != prev;
}

bool dwell_change(const TriggerPolicy& policy, const std::deque<Observation>& window,
                  const Observation& new_obs) {
    const int n = policy.dwell_n;
    if (static_cast<int>(window.size()) < n - 1) return false;
    const std::string d = dominant_token(new_obs.text);
    if (d.empty()) return false;
    for (int i = 1; i < n; ++i) {
        if (dominant_token(window[window.size() - i].text) != d) return false;
    }
    // rising edge only: the observation just before the run must differ
    if (static_cast<int>(window.size()) >= n &&
        dominant_token(window[window.size() - n].text) == d) {
        return false;
    }
    return true;
}

bool novel_scene(const TriggerPolicy& policy, const std::deque<Observation>& window,
                 const Observation& new_obs) {
    if (window.empty()) return false;
    double max_similarity = 0.0;
    for (const auto& obs : window) {
        max_similarity = std::max(max_similarity, jaccard(new_obs.text, obs.text));
    }
    return max_similarity < policy.jaccard_threshold;
}

} // namespace

ChangePredicate change_predicate_from_string(const std::string& s) {
    if (s == "numeric-count") return ChangePredicate::NumericCountChange;
    if (s == "dwell") return ChangePredicate::Dwell;
    if (s == "novel-scene") return ChangePredicate::NovelScene;
    throw ParseError("unknown change predicate: " + s);
}

std::optional<Observation> ingest(const Event& event) {
    switch (event.kind) {
        case EventKind::FrameDescription:
            return Observation{event.t, event.payload, Source::Frame};
        case EventKind::SpeechUtterance:
            return Observation{event.t, event.payload, Source::Speech};
        case EventKind::Tick:
            return std::nullopt;
    }
    return std::nullopt;
}

int numeric_token_count(const std::string& text) {
    int count = 0;
    for (const auto& tok : tokenize(text)) {
        if (std::all_of(tok.begin(), tok.end(),
                        [](unsigned char c) { return std::isdigit(c); })) {
            ++count;
        }
    }
    return count;
}

std::string dominant_token(const std::string& text) {
    std::map<std::string, int> counts;
    for (const auto& tok : tokenize(text)) {
        if (tok.size() >= 4) ++counts[tok];
    }
    std::string best;
    int best_count = 0;
    for (const auto& [tok, count] : counts) {
        if (count > best_count) { // ties go to the lexicographically first token
            best = tok;
            best_count = count;
        }
    }
    return best;
}

double jaccard(const std::string& a, const std::string& b) {
    const auto sa = token_set(a);
    const auto sb = token_set(b);
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& tok : sa) {
        if (sb.count(tok)) ++inter;
    }
    const std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::optional<TriggerSignal> detect_trigger(const TriggerPolicy& policy,
                                            const std::deque<Observation>& window,
                                            const Observation& new_obs,
                                            const ModelBackend* backend,
                                            const PromptPack* pack) {
    if (new_obs.source == Source::Speech && !policy.command_markers.empty()) {
        const std::string lowered = to_lower(new_obs.text);
        for (const auto& marker : policy.command_markers) {
            if (lowered.find(to_lower(marker)) != std::string::npos) {
                return TriggerSignal{new_obs.t, TriggerCause::UserCommand, new_obs.text};
            }
        }
    }

    if (policy.mode == PolicyMode::RuleBased) {
        bool fired = false;
        switch (policy.predicate) {
            case ChangePredicate::NumericCountChange: fired = numeric_change(window, new_obs); break;
            case ChangePredicate::Dwell: fired = dwell_change(policy, window, new_obs); break;
            case ChangePredicate::NovelScene: fired = novel_scene(policy, window, new_obs); break;
        }
        if (fired) {
            return TriggerSignal{new_obs.t, TriggerCause::IntentChange, new_obs.text};
        }
        return std::nullopt;
    }

    // ModelBacked: the trigger prompt answers "TRIGGER: <preliminary>" or anything else.
    if (backend == nullptr || pack == nullptr) {
        throw Error("model-backed trigger policy without a backend");
    }
    std::string stream_text;
    for (const auto& obs : window) {
        stream_text += obs.text;
        stream_text += '\n';
    }
    stream_text += new_obs.text;
    const ModelRequest request{policy.prompt_id,
                               {{Role::System, pack->get(policy.prompt_id)},
                                {Role::User, stream_text}}};
    const std::string output = backend->complete(request).text;
    if (output.rfind("TRIGGER:", 0) == 0) {
        std::string preliminary = output.substr(8);
        const auto b = preliminary.find_first_not_of(" \t");
        preliminary = (b == std::string::npos) ? new_obs.text : preliminary.substr(b);
        return TriggerSignal{new_obs.t, TriggerCause::IntentChange, preliminary};
    }
    return std::nullopt;
}

std::optional<TriggerSignal> evaluate_trigger(const TriggerPolicy& policy,
                                              const std::deque<Observation>& window,
                                              const Observation& new_obs,
                                              std::optional<double> last_trigger_t,
                                              const ModelBackend* backend,
                                              const PromptPack* pack) {
    auto signal = detect_trigger(policy, window, new_obs, backend, pack);
    if (signal && last_trigger_t && signal->t - *last_trigger_t < policy.cooldown) {
        return std::nullopt;
    }
    return signal;
}

ModelRequest build_describe_request(const PromptPack& pack,
                                    const std::deque<Observation>& window,
                                    const std::string& prompt_id,
                                    const std::string& seed) {
    std::string stream_text;
    for (const auto& obs : window) {
        if (!stream_text.empty()) stream_text += '\n';
        stream_text += obs.text;
    }
    if (!seed.empty()) {
        stream_text += "\nFocus: " + seed;
    }
    return {prompt_id, {{Role::System, pack.get(prompt_id)}, {Role::User, stream_text}}};
}

VisualDescription describe_scene(const ModelBackend& backend, const PromptPack& pack,
                                 const std::deque<Observation>& window,
                                 const std::string& prompt_id,
                                 const std::string& seed) {
    if (window.empty()) {
        throw Error("describe_scene: empty window");
    }
    static const std::string marker = "[Visual Description]";
    const std::string output = backend.complete(build_describe_request(pack, window, prompt_id, seed)).text;
    if (output.rfind(marker, 0) != 0) {
        throw MalformedDescription("description missing the " + marker + " marker");
    }
    std::string text = output.substr(marker.size());
    const auto b = text.find_first_not_of(" \t\n");
    text = (b == std::string::npos) ? "" : text.substr(b);
    if (text.empty()) {
        throw MalformedDescription("empty description body");
    }
    return {window.back().t, text, prompt_id};
}

} // namespace alpha
