#include "alpha/alu.hpp"

#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

namespace alpha {

namespace {

void validate_item(const SearchResultItem& item, const std::string& query) {
    if (item.topic.empty() || item.summary.empty() || item.snippets.empty() || item.link.empty()) {
        throw Error("search fixture item with empty field for query: " + query);
    }
    if (item.link.find("://") == std::string::npos) {
        throw Error("search fixture link without scheme: " + item.link);
    }
}

// Fields must not carry the wire format's structure: braces and the item
// separator "; " are replaced with spaces.
std::string sanitize(std::string field) {
    for (auto& c : field) {
        if (c == '{' || c == '}') c = ' ';
    }
    std::string::size_type pos = 0;
    while ((pos = field.find("; ", pos)) != std::string::npos) {
        field[pos] = ' ';
        field[pos + 1] = ' ';
    }
    return field;
}

} // namespace

FixtureSearchProvider FixtureSearchProvider::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ProviderUnavailable("search fixtures not readable: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderUnavailable("search fixtures parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

FixtureSearchProvider FixtureSearchProvider::from_json(const nlohmann::json& j) {
    FixtureSearchProvider provider;
    for (const auto& [query, arr] : j.items()) {
        std::vector<SearchResultItem> items;
        for (const auto& node : arr) {
            SearchResultItem item{node.at("topic").get<std::string>(),
                                  node.at("summary").get<std::string>(),
                                  node.at("snippets").get<std::string>(),
                                  node.at("link").get<std::string>()};
            validate_item(item, query);
            items.push_back(std::move(item));
        }
        provider.entries_[query] = std::move(items);
    }
    return provider;
}

std::vector<SearchResultItem> FixtureSearchProvider::search(const std::string& query) const {
    auto it = entries_.find(query);
    if (it == entries_.end()) {
        throw UnknownFixtureQuery("no search fixture for query: " + query);
    }
    return it->second;
}

std::vector<std::string> FixtureSearchProvider::queries() const {
    std::vector<std::string> out;
    for (const auto& [q, _] : entries_) out.push_back(q);
    return out;
}

void ToolRegistry::register_tool(ToolSpec spec) {
    if (tools_.count(spec.name) != 0) {
        throw DuplicateTool("tool already registered: " + spec.name);
    }
    tools_.emplace(spec.name, std::move(spec));
}

bool ToolRegistry::has(const std::string& name) const {
    return tools_.count(name) != 0;
}

std::string ToolRegistry::invoke(const ToolCall& call) const {
    auto it = tools_.find(call.tool_name);
    if (it == tools_.end()) {
        throw UnknownTool("unknown tool: " + call.tool_name);
    }
    return it->second.invoke(call.argument);
}

ModelRequest build_decide_request(const PromptPack& pack, const std::string& query) {
    return {"alu.decide", {{Role::System, pack.get("alu.decide")}, {Role::User, query}}};
}

SearchDecision decide(const std::string& query, const ModelBackend& backend,
                      const PromptPack& pack) {
    if (query.empty()) {
        throw Error("decide: empty query");
    }
    const std::string output = backend.complete(build_decide_request(pack, query)).text;
    if (auto call = parse_tool_call(output); call && call->tool_name == "web_search") {
        return {SearchDecision::Kind::Search, call->argument};
    }
    return {SearchDecision::Kind::Answer, output};
}

std::optional<ToolCall> parse_tool_call(const std::string& model_output) {
    static const std::regex pattern(R"re(web_search\("([^"]*)"\))re");
    std::smatch m;
    if (std::regex_search(model_output, m, pattern)) {
        return ToolCall{"web_search", m[1].str()};
    }
    return std::nullopt;
}

std::vector<SearchResultItem> execute_search(const SearchProvider& provider,
                                             const std::string& query, std::size_t k) {
    if (k < 1) {
        throw Error("execute_search: k must be >= 1");
    }
    auto items = provider.search(query);
    if (items.size() > k) items.resize(k);
    return items;
}

std::string format_results(const std::vector<SearchResultItem>& items) {
    if (items.empty()) {
        return "Search Results: (none)";
    }
    std::string out = "Search Results: ";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += "; ";
        out += std::to_string(i + 1) + ". {" + sanitize(items[i].topic) + "}{" +
               sanitize(items[i].summary) + "}{" + sanitize(items[i].snippets) + "}{" +
               sanitize(items[i].link) + "}";
    }
    return out;
}

std::vector<SearchResultItem> parse_results(const std::string& text) {
    static const std::string prefix = "Search Results: ";
    if (text.rfind(prefix, 0) != 0) {
        throw Error("parse_results: missing prefix");
    }
    std::string rest = text.substr(prefix.size());
    if (rest == "(none)") {
        return {};
    }
    std::vector<SearchResultItem> items;
    std::size_t pos = 0;
    std::size_t index = 1;
    while (pos < rest.size()) {
        const std::string head = std::to_string(index) + ". ";
        if (rest.compare(pos, head.size(), head) != 0) {
            throw Error("parse_results: bad item index at offset " + std::to_string(pos));
        }
        pos += head.size();
        std::string fields[4];
        for (auto& field : fields) {
            if (pos >= rest.size() || rest[pos] != '{') {
                throw Error("parse_results: expected '{'");
            }
            const auto close = rest.find('}', pos + 1);
            if (close == std::string::npos) {
                throw Error("parse_results: unterminated field");
            }
            field = rest.substr(pos + 1, close - pos - 1);
            pos = close + 1;
        }
        items.push_back({fields[0], fields[1], fields[2], fields[3]});
        if (pos == rest.size()) break;
        if (rest.compare(pos, 2, "; ") != 0) {
            throw Error("parse_results: expected item separator");
        }
        pos += 2;
        ++index;
    }
    return items;
}

ToolSpec make_web_search_tool(const SearchProvider& provider, std::size_t k) {
    return {"web_search", "retrieve top-ranked results for a query",
            [&provider, k](const std::string& query) {
                return format_results(execute_search(provider, query, k));
            }};
}

} // namespace alpha
