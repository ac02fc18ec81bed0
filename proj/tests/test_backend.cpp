#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "alpha/backend.hpp"
#include "helpers.hpp"

using namespace alpha;

namespace {

// Independent FNV-1a 64 reference, kept separate from the implementation.
std::string fnv1a_hex(const std::string& bytes) {
    unsigned long long h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

} // namespace

TEST_CASE("content_hash matches published FNV-1a 64 vectors") {
    // Well-known FNV-1a test vectors over the raw byte strings.
    CHECK(content_hash({}) == "cbf29ce484222325");
    CHECK(content_hash({{Role::User, "a"}}) == "af63dc4c8601ec8c");
    CHECK(content_hash({{Role::User, "foobar"}}) == "85944171f73967e8");
}

TEST_CASE("content_hash concatenates message contents in order") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::string a, b;
        const int la = static_cast<int>(rng() % 40);
        const int lb = static_cast<int>(rng() % 40);
        for (int k = 0; k < la; ++k) a += static_cast<char>('!' + rng() % 90);
        for (int k = 0; k < lb; ++k) b += static_cast<char>('!' + rng() % 90);
        CHECK(content_hash({{Role::System, a}, {Role::User, b}}) == fnv1a_hex(a + b));
    }
    // role does not participate in the hash, only content
    CHECK(content_hash({{Role::System, "x"}, {Role::User, "y"}}) ==
          content_hash({{Role::User, "x"}, {Role::User, "y"}}));
}

TEST_CASE("prompt pack lookup") {
    const auto pack = PromptPack::from_json(nlohmann::json{{"a.b", "hello"}});
    CHECK(pack.has("a.b"));
    CHECK_FALSE(pack.has("a.c"));
    CHECK(pack.get("a.b") == "hello");
    CHECK_THROWS_AS((void)pack.get("a.c"), UnknownPromptId);
}

TEST_CASE("scripted backend resolves case, then default, then misses") {
    const std::vector<Message> messages{{Role::System, "sys"}, {Role::User, "user text"}};
    nlohmann::json j;
    j["p.one"]["cases"][content_hash(messages)] = "matched";
    j["p.one"]["default"] = "fallback";
    j["p.two"]["default"] = "only default";
    const auto backend = ScriptedBackend::from_json(j);

    CHECK(backend.complete({"p.one", messages}).text == "matched");
    CHECK(backend.complete({"p.one", {{Role::User, "other"}}}).text == "fallback");
    CHECK(backend.complete({"p.two", messages}).text == "only default");

    try {
        backend.complete({"p.missing", {{Role::User, "the user said this"}}});
        FAIL("expected FixtureMiss");
    } catch (const FixtureMiss& e) {
        const std::string what = e.what();
        CHECK(what.find("p.missing") != std::string::npos);
        CHECK(what.find("the user said this") != std::string::npos);
    }
}

TEST_CASE("scripted backend rejects requests without a user message") {
    const auto backend = ScriptedBackend::from_json(nlohmann::json::object());
    CHECK_THROWS_AS(backend.complete({"p", {{Role::System, "sys only"}}}), Error);
}

namespace {

class FakeTransport : public Transport {
public:
    HttpResponse response{200, R"({"choices":[{"message":{"content":"hi there"}}]})"};
    std::string last_url;
    std::vector<std::pair<std::string, std::string>> last_headers;
    std::string last_body;
    int calls = 0;

    HttpResponse post(const std::string& url,
                      const std::vector<std::pair<std::string, std::string>>& headers,
                      const std::string& body) override {
        ++calls;
        last_url = url;
        last_headers = headers;
        last_body = body;
        return response;
    }
};

} // namespace

TEST_CASE("remote backend speaks the chat-completion wire format") {
    FakeTransport transport;
    setenv("ALPHA_TEST_CRED", "sekrit-token", 1);
    RemoteBackend backend("https://example.test/v1/chat", "test-model", "ALPHA_TEST_CRED", 5.0,
                          &transport);

    const auto resp = backend.complete(
        {"p.id", {{Role::System, "be helpful"}, {Role::User, "question?"}}, 64});
    CHECK(resp.text == "hi there");
    CHECK(transport.calls == 1);
    CHECK(transport.last_url == "https://example.test/v1/chat");

    const auto body = nlohmann::json::parse(transport.last_body);
    CHECK(body.at("model") == "test-model");
    CHECK(body.at("messages").size() == 2);
    CHECK(body.at("messages")[0].at("role") == "system");
    CHECK(body.at("messages")[1].at("content") == "question?");
    CHECK(body.at("max_tokens") == 64);

    bool saw_auth = false;
    for (const auto& [k, v] : transport.last_headers) {
        if (k == "Authorization") {
            saw_auth = true;
            CHECK(v == "Bearer sekrit-token");
        }
    }
    CHECK(saw_auth);
}

TEST_CASE("remote backend error mapping never leaks the credential") {
    FakeTransport transport;
    setenv("ALPHA_TEST_CRED", "sekrit-token", 1);
    RemoteBackend backend("https://example.test/v1/chat", "m", "ALPHA_TEST_CRED", 5.0, &transport);
    const ModelRequest request{"p", {{Role::User, "q"}}};

    transport.response = {500, "sekrit-token echoed in body"};
    try {
        backend.complete(request);
        FAIL("expected NonSuccessStatus");
    } catch (const NonSuccessStatus& e) {
        const std::string what = e.what();
        CHECK(what.find("500") != std::string::npos);
        CHECK(what.find("sekrit") == std::string::npos);
    }

    transport.response = {200, "not json at all"};
    CHECK_THROWS_AS(backend.complete(request), TransportFailure);
}

TEST_CASE("make_backend falls back to the scenario fixture path") {
    const std::string path = testutil::temp_path("fixtures");
    {
        nlohmann::json j;
        j["p"]["default"] = "from file";
        std::ofstream out(path);
        out << j.dump();
    }
    BackendSpec spec; // scripted with empty fixture_path
    const auto backend = make_backend(spec, path, nullptr);
    CHECK(backend->complete({"p", {{Role::User, "x"}}}).text == "from file");

    BackendSpec empty_spec;
    CHECK_THROWS_AS(make_backend(empty_spec, "", nullptr), Error);
}
