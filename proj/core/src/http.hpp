#pragma once

// Thin wrapper around cpp-httplib so that the heavy header is compiled once.

#include <optional>
#include <string>

namespace claimforge::detail {

struct Url {
    std::string scheme;  // "http", "https" or "file"
    std::string host;
    int port = 0;
    std::string path;  // includes query string; filesystem path for file://

    [[nodiscard]] auto origin() const -> std::string;
};

/// Parses http(s)://host[:port][/path] and file:///path. Returns nullopt for
/// anything else.
[[nodiscard]] auto parse_url(std::string const& url) -> std::optional<Url>;

enum class HttpErrorKind { none, timeout, transport, unsupported };

struct HttpResponse {
    HttpErrorKind error = HttpErrorKind::none;
    int status = 0;
    std::string body;
    std::string message;
};

[[nodiscard]] auto http_get(Url const& url, std::string const& user_agent, double timeout_seconds,
                            std::size_t max_bytes) -> HttpResponse;

[[nodiscard]] auto http_post_json(Url const& url, std::string const& body, double timeout_seconds)
    -> HttpResponse;

}  // namespace claimforge::detail
