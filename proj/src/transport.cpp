#include "alpha/backend.hpp"

#include <httplib.h>

namespace alpha {

namespace {

// Split "scheme://host[:port]/path" into base and path for httplib.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw TransportFailure("endpoint without scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

HttplibTransport::HttplibTransport(double timeout_seconds) : timeout_seconds_(timeout_seconds) {}

HttpResponse HttplibTransport::post(const std::string& url,
                                    const std::vector<std::pair<std::string, std::string>>& headers,
                                    const std::string& body) {
    const auto [base, path] = split_url(url);
    httplib::Client client(base);
    const auto secs = static_cast<time_t>(timeout_seconds_);
    const auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);

    httplib::Headers hl;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
        if (k == "Content-Type") {
            content_type = v;
        } else {
            hl.emplace(k, v);
        }
    }
    auto result = client.Post(path, hl, body, content_type);
    if (!result) {
        if (result.error() == httplib::Error::ConnectionTimeout ||
            result.error() == httplib::Error::Read) {
            throw Timeout("request timed out");
        }
        throw TransportFailure("transport error: " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
}

} // namespace alpha
