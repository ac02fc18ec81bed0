#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alpha/backend.hpp"

namespace alpha {

struct SearchResultItem {
    std::string topic;
    std::string summary;
    std::string snippets;
    std::string link; // absolute reference with a scheme prefix
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    virtual std::vector<SearchResultItem> search(const std::string& query) const = 0;
};

// Resolves queries by exact key against a JSON file:
//   {query: [{topic, summary, snippets, link}, ...]}
class FixtureSearchProvider : public SearchProvider {
public:
    static FixtureSearchProvider load(const std::string& path); // ProviderUnavailable
    static FixtureSearchProvider from_json(const nlohmann::json& j);

    std::vector<SearchResultItem> search(const std::string& query) const override;
    std::vector<std::string> queries() const;

private:
    std::map<std::string, std::vector<SearchResultItem>> entries_;
};

struct SearchDecision {
    enum class Kind { Answer, Search };
    Kind kind = Kind::Answer;
    std::string text; // the answer, or the search query
};

struct ToolCall {
    std::string tool_name;
    std::string argument;
};

struct ToolSpec {
    std::string name;
    std::string description;
    std::function<std::string(const std::string&)> invoke;
};

class ToolRegistry {
public:
    void register_tool(ToolSpec spec);               // DuplicateTool
    bool has(const std::string& name) const;         // case-sensitive exact match
    std::string invoke(const ToolCall& call) const;  // UnknownTool

private:
    std::map<std::string, ToolSpec> tools_;
};

ModelRequest build_decide_request(const PromptPack& pack, const std::string& query);

// Search-decision gate: prompts the backend, parses a web_search("...") call
// out of the answer; no call means the model answered from internal knowledge.
SearchDecision decide(const std::string& query, const ModelBackend& backend,
                      const PromptPack& pack);

// First web_search("...") occurrence anywhere in the output; total.
std::optional<ToolCall> parse_tool_call(const std::string& model_output);

std::vector<SearchResultItem> execute_search(const SearchProvider& provider,
                                             const std::string& query, std::size_t k);

// `Search Results: 1. {topic}{summary}{snippets}{link}; 2. {...}` with fields
// sanitized so the rendering stays parseable; empty -> `Search Results: (none)`.
std::string format_results(const std::vector<SearchResultItem>& items);

// Strict grammar parser inverting format_results on sanitized items.
std::vector<SearchResultItem> parse_results(const std::string& text);

ToolSpec make_web_search_tool(const SearchProvider& provider, std::size_t k);

} // namespace alpha
