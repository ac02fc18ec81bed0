#include "alpha/backend.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace alpha {

namespace {

nlohmann::json load_json_file(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) {
        throw Error(std::string(what) + " not readable: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string(what) + " parse failure in " + path + ": " + e.what());
    }
    return j;
}

void validate_request(const ModelRequest& request) {
    for (const auto& m : request.messages) {
        if (m.role == Role::User) return;
    }
    throw Error("model request without a User message (prompt_id=" + request.prompt_id + ")");
}

} // namespace

std::string content_hash(const std::vector<Message>& messages) {
    std::uint64_t h = 14695981039346656037ull;
    for (const auto& m : messages) {
        for (unsigned char c : m.content) {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PromptPack PromptPack::load(const std::string& path) {
    return from_json(load_json_file(path, "prompt pack"));
}

PromptPack PromptPack::from_json(const nlohmann::json& j) {
    PromptPack pack;
    for (const auto& [id, tmpl] : j.items()) {
        pack.templates_[id] = tmpl.get<std::string>();
    }
    return pack;
}

const std::string& PromptPack::get(const std::string& id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) {
        throw UnknownPromptId("prompt id not in pack: " + id);
    }
    return it->second;
}

bool PromptPack::has(const std::string& id) const {
    return templates_.count(id) != 0;
}

ScriptedBackend ScriptedBackend::load(const std::string& path) {
    return from_json(load_json_file(path, "model fixtures"));
}

ScriptedBackend ScriptedBackend::from_json(const nlohmann::json& j) {
    ScriptedBackend backend;
    for (const auto& [prompt_id, node] : j.items()) {
        PromptFixtures f;
        if (node.contains("default")) {
            f.has_default = true;
            f.default_text = node.at("default").get<std::string>();
        }
        if (node.contains("cases")) {
            for (const auto& [hash, text] : node.at("cases").items()) {
                f.cases[hash] = text.get<std::string>();
            }
        }
        backend.fixtures_[prompt_id] = std::move(f);
    }
    return backend;
}

ModelResponse ScriptedBackend::complete(const ModelRequest& request) const {
    validate_request(request);
    const std::string key = content_hash(request.messages);
    auto it = fixtures_.find(request.prompt_id);
    if (it != fixtures_.end()) {
        auto hit = it->second.cases.find(key);
        if (hit != it->second.cases.end()) {
            return {hit->second, 0.0};
        }
        if (it->second.has_default) {
            return {it->second.default_text, 0.0};
        }
    }
    std::string excerpt;
    for (auto rit = request.messages.rbegin(); rit != request.messages.rend(); ++rit) {
        if (rit->role == Role::User) {
            excerpt = rit->content.substr(0, 96);
            break;
        }
    }
    throw FixtureMiss("no fixture for prompt_id=" + request.prompt_id + " key=" + key +
                      " user=\"" + excerpt + "\"");
}

RemoteBackend::RemoteBackend(std::string endpoint, std::string model, std::string credential_env,
                             double timeout_seconds, Transport* transport)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      credential_env_(std::move(credential_env)),
      timeout_seconds_(timeout_seconds),
      transport_(transport) {
    if (transport_ == nullptr) {
        owned_transport_ = std::make_unique<HttplibTransport>(timeout_seconds_);
        transport_ = owned_transport_.get();
    }
}

ModelResponse RemoteBackend::complete(const ModelRequest& request) const {
    validate_request(request);
    nlohmann::json body;
    body["model"] = model_;
    auto& messages = body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", m.role == Role::System ? "system" : "user"},
                            {"content", m.content}});
    }
    if (request.max_length > 0) {
        body["max_tokens"] = request.max_length;
    }

    std::vector<std::pair<std::string, std::string>> headers{{"Content-Type", "application/json"}};
    if (!credential_env_.empty()) {
        if (const char* cred = std::getenv(credential_env_.c_str())) {
            headers.emplace_back("Authorization", std::string("Bearer ") + cred);
        }
    }

    const HttpResponse resp = transport_->post(endpoint_, headers, body.dump());
    if (resp.status < 200 || resp.status >= 300) {
        // Error text carries the status only; response bodies can echo headers.
        throw NonSuccessStatus("chat completion returned status " + std::to_string(resp.status));
    }
    try {
        const auto parsed = nlohmann::json::parse(resp.body);
        return {parsed.at("choices").at(0).at("message").at("content").get<std::string>(), 0.0};
    } catch (const nlohmann::json::exception& e) {
        throw TransportFailure(std::string("unparseable chat completion response: ") + e.what());
    }
}

std::unique_ptr<ModelBackend> make_backend(const BackendSpec& spec,
                                           const std::string& default_fixture_path,
                                           Transport* transport) {
    if (spec.kind == BackendSpec::Kind::Scripted) {
        const std::string& path = spec.fixture_path.empty() ? default_fixture_path : spec.fixture_path;
        if (path.empty()) {
            throw Error("scripted backend without a fixture path");
        }
        return std::make_unique<ScriptedBackend>(ScriptedBackend::load(path));
    }
    return std::make_unique<RemoteBackend>(spec.endpoint, spec.model, spec.credential_env,
                                           spec.timeout_seconds, transport);
}

} // namespace alpha
