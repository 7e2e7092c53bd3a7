#include "http.hpp"

#include <chrono>
#include <cmath>

#include <httplib.h>

namespace claimforge::detail {

namespace {

auto is_host_char(char c) -> bool
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.'
        || c == '-' || c == '_';
}

auto make_client(Url const& url, double timeout_seconds) -> httplib::Client
{
    httplib::Client client(url.origin());
    auto whole = static_cast<time_t>(std::floor(timeout_seconds));
    auto micros = static_cast<time_t>((timeout_seconds - static_cast<double>(whole)) * 1e6);
    client.set_connection_timeout(whole, micros);
    client.set_read_timeout(whole, micros);
    client.set_write_timeout(whole, micros);
    return client;
}

auto classify(httplib::Error err, std::chrono::steady_clock::time_point start, double timeout_seconds)
    -> HttpErrorKind
{
    if (err == httplib::Error::ConnectionTimeout) {
        return HttpErrorKind::timeout;
    }
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (err == httplib::Error::Read && elapsed >= timeout_seconds * 0.95) {
        return HttpErrorKind::timeout;
    }
    return HttpErrorKind::transport;
}

}  // namespace

auto Url::origin() const -> std::string
{
    auto out = scheme + "://" + host;
    if (port != 0) {
        out += ":" + std::to_string(port);
    }
    return out;
}

auto parse_url(std::string const& url) -> std::optional<Url>
{
    auto sep = url.find("://");
    if (sep == std::string::npos) {
        return std::nullopt;
    }
    Url out;
    out.scheme = url.substr(0, sep);
    auto rest = url.substr(sep + 3);
    if (out.scheme == "file") {
        if (rest.empty() || rest.front() != '/') {
            return std::nullopt;
        }
        out.path = rest;
        return out;
    }
    if (out.scheme != "http" && out.scheme != "https") {
        return std::nullopt;
    }
    auto path_pos = rest.find_first_of("/?#");
    auto authority = rest.substr(0, path_pos);
    out.path = path_pos == std::string::npos ? "/" : rest.substr(path_pos);
    if (!out.path.empty() && out.path.front() != '/') {
        out.path.insert(out.path.begin(), '/');
    }
    auto colon = authority.rfind(':');
    if (colon != std::string::npos) {
        auto port_text = authority.substr(colon + 1);
        if (port_text.empty() || port_text.size() > 5
            || port_text.find_first_not_of("0123456789") != std::string::npos) {
            return std::nullopt;
        }
        out.port = std::stoi(port_text);
        if (out.port <= 0 || out.port > 65535) {
            return std::nullopt;
        }
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) {
        return std::nullopt;
    }
    for (char c: authority) {
        if (!is_host_char(c)) {
            return std::nullopt;
        }
    }
    out.host = authority;
    return out;
}

auto http_get(Url const& url, std::string const& user_agent, double timeout_seconds, std::size_t max_bytes)
    -> HttpResponse
{
    HttpResponse out;
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.scheme == "https") {
        out.error = HttpErrorKind::unsupported;
        out.message = "built without TLS support";
        return out;
    }
#endif
    auto client = make_client(url, timeout_seconds);
    client.set_follow_location(true);
    httplib::Headers headers{{"User-Agent", user_agent}};
    auto start = std::chrono::steady_clock::now();
    std::string body;
    auto res = client.Get(url.path, headers, [&](char const* data, std::size_t len) {
        auto room = max_bytes > body.size() ? max_bytes - body.size() : 0;
        body.append(data, std::min(room, len));
        return body.size() < max_bytes;
    });
    if (!res) {
        // Stopping the receiver at max_bytes surfaces as Canceled; keep what we have.
        if (res.error() == httplib::Error::Canceled && !body.empty()) {
            out.status = 200;
            out.body = std::move(body);
            return out;
        }
        out.error = classify(res.error(), start, timeout_seconds);
        out.message = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = std::move(body);
    return out;
}

auto http_post_json(Url const& url, std::string const& body, double timeout_seconds) -> HttpResponse
{
    HttpResponse out;
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.scheme == "https") {
        out.error = HttpErrorKind::unsupported;
        out.message = "built without TLS support";
        return out;
    }
#endif
    auto client = make_client(url, timeout_seconds);
    auto start = std::chrono::steady_clock::now();
    auto res = client.Post(url.path, body, "application/json");
    if (!res) {
        out.error = classify(res.error(), start, timeout_seconds);
        out.message = httplib::to_string(res.error());
        return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
}

}  // namespace claimforge::detail
