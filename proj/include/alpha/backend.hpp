#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "alpha/errors.hpp"

namespace alpha {

enum class Role { System, User };

struct Message {
    Role role = Role::User;
    std::string content;
};

struct ModelRequest {
    std::string prompt_id;
    std::vector<Message> messages; // at least one User message
    int max_length = 0;            // 0 = backend default
};

struct ModelResponse {
    std::string text;
    double latency = 0.0; // seconds, 0 for scripted
};

// FNV-1a 64 over the concatenated message contents, 16 hex chars.
std::string content_hash(const std::vector<Message>& messages);

class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual ModelResponse complete(const ModelRequest& request) const = 0;
};

// Named prompt templates loaded from a JSON object {id: template}.
class PromptPack {
public:
    PromptPack() = default;
    static PromptPack load(const std::string& path);
    static PromptPack from_json(const nlohmann::json& j);

    const std::string& get(const std::string& id) const; // throws UnknownPromptId
    bool has(const std::string& id) const;

private:
    std::map<std::string, std::string> templates_;
};

// Deterministic fixture-driven backend. Fixture file:
//   {prompt_id: {"default": text?, "cases": {content-hash: text}}}
class ScriptedBackend : public ModelBackend {
public:
    static ScriptedBackend load(const std::string& path);
    static ScriptedBackend from_json(const nlohmann::json& j);

    ModelResponse complete(const ModelRequest& request) const override;

private:
    struct PromptFixtures {
        bool has_default = false;
        std::string default_text;
        std::map<std::string, std::string> cases;
    };
    std::map<std::string, PromptFixtures> fixtures_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const std::string& url,
                              const std::vector<std::pair<std::string, std::string>>& headers,
                              const std::string& body) = 0;
};

// Real HTTP transport (cpp-httplib); never exercised by the test suite.
class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(double timeout_seconds);
    HttpResponse post(const std::string& url,
                      const std::vector<std::pair<std::string, std::string>>& headers,
                      const std::string& body) override;

private:
    double timeout_seconds_;
};

// Chat-completion client. One wire exchange per complete() call, no retries.
// The credential is read from the named environment variable at call time and
// never appears in errors or traces.
class RemoteBackend : public ModelBackend {
public:
    RemoteBackend(std::string endpoint, std::string model, std::string credential_env,
                  double timeout_seconds, Transport* transport);

    ModelResponse complete(const ModelRequest& request) const override;

private:
    std::string endpoint_;
    std::string model_;
    std::string credential_env_;
    double timeout_seconds_;
    Transport* transport_; // not owned
    std::unique_ptr<Transport> owned_transport_;
};

struct BackendSpec {
    enum class Kind { Scripted, Remote };
    Kind kind = Kind::Scripted;
    // Scripted
    std::string fixture_path; // empty = use the scenario's model_fixtures
    // Remote
    std::string endpoint;
    std::string model;
    std::string credential_env;
    double timeout_seconds = 10.0;
};

// transport may be null; remote backends then construct an HttplibTransport.
std::unique_ptr<ModelBackend> make_backend(const BackendSpec& spec,
                                           const std::string& default_fixture_path,
                                           Transport* transport);

} // namespace alpha
