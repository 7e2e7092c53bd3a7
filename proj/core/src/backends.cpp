#include "claimforge/backends.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"

namespace claimforge::backends {

namespace {

void require(bool ok, Role role, std::string const& what)
{
    if (!ok) {
        throw BackendError(role, BackendErrorKind::schema, what);
    }
}

void require_string(json const& j, char const* key, Role role)
{
    require(j.is_object() && j.contains(key) && j.at(key).is_string(), role,
            std::string("'") + key + "' must be a string");
}

void require_string_array(json const& j, char const* key, Role role)
{
    require(j.is_object() && j.contains(key) && j.at(key).is_array(), role,
            std::string("'") + key + "' must be an array of strings");
    for (auto const& item: j.at(key)) {
        require(item.is_string(), role, std::string("'") + key + "' must be an array of strings");
    }
}

void require_probability(json const& j, char const* key, Role role)
{
    require(j.contains(key) && j.at(key).is_number(), role, std::string("'") + key + "' must be a number");
    auto v = j.at(key).get<double>();
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0, role, std::string("'") + key + "' must lie in [0,1]");
}

}  // namespace

auto to_string(Role role) -> std::string_view
{
    switch (role) {
    case Role::summarizer: return "summarizer";
    case Role::entailment: return "entailment";
    case Role::qg: return "qg";
    case Role::qa: return "qa";
    case Role::qa2d: return "qa2d";
    case Role::decontext: return "decontext";
    case Role::checkworthy: return "checkworthy";
    }
    return "unknown";
}

auto parse_role(std::string_view name) -> Role
{
    for (auto role: kAllRoles) {
        if (to_string(role) == name) {
            return role;
        }
    }
    throw InvalidArgument("unknown backend role '" + std::string(name) + "'");
}

auto to_string(BackendErrorKind kind) -> std::string_view
{
    switch (kind) {
    case BackendErrorKind::timeout: return "timeout";
    case BackendErrorKind::transport: return "transport";
    case BackendErrorKind::malformed: return "malformed response";
    case BackendErrorKind::schema: return "schema violation";
    case BackendErrorKind::failure: return "backend failure";
    case BackendErrorKind::unregistered: return "no backend registered";
    }
    return "error";
}

BackendError::BackendError(Role role, BackendErrorKind kind, std::string const& detail)
    : Error(std::string(to_string(role)) + " backend: " + std::string(to_string(kind))
            + (detail.empty() ? "" : ": " + detail)),
      m_role(role),
      m_kind(kind)
{}

void BackendDescriptor::validate() const
{
    if (timeout_seconds <= 0.0) {
        throw InvalidArgument(std::string(to_string(role)) + ": timeout_seconds must be positive");
    }
    if (kind == BackendKind::remote) {
        if (endpoint.empty()) {
            throw InvalidArgument(std::string(to_string(role)) + ": remote backend requires an endpoint");
        }
        if (!endpoint.starts_with("http://") && !endpoint.starts_with("https://")) {
            throw InvalidArgument(std::string(to_string(role)) + ": endpoint must be an http(s) URL");
        }
        if (max_in_flight == 0) {
            throw InvalidArgument(std::string(to_string(role)) + ": max_in_flight must be >= 1");
        }
    }
}

void validate_request(Role role, json const& request)
{
    require(request.is_object(), role, "request must be a JSON object");
    switch (role) {
    case Role::summarizer: require_string_array(request, "sentences", role); break;
    case Role::entailment:
        require_string(request, "premise", role);
        require_string(request, "hypothesis", role);
        break;
    case Role::qg:
        require_string(request, "sentence", role);
        require_string(request, "answer", role);
        if (request.contains("kind")) {
            require_string(request, "kind", role);
        }
        break;
    case Role::qa:
        require_string(request, "question", role);
        require_string_array(request, "evidence", role);
        break;
    case Role::qa2d:
        require_string(request, "question", role);
        require_string(request, "answer", role);
        break;
    case Role::decontext: require_string(request, "input", role); break;
    case Role::checkworthy: require_string(request, "text", role); break;
    }
}

void validate_response(Role role, json const& response)
{
    require(response.is_object(), role, "response must be a JSON object");
    require_string(response, "model_name", role);
    require(response.contains("latency_ms") && response.at("latency_ms").is_number()
                && response.at("latency_ms").get<double>() >= 0.0,
            role, "'latency_ms' must be a non-negative number");
    switch (role) {
    case Role::summarizer:
        require(response.contains("scores") && response.at("scores").is_array(), role,
                "'scores' must be an array of numbers");
        for (auto const& s: response.at("scores")) {
            require(s.is_number(), role, "'scores' must be an array of numbers");
        }
        break;
    case Role::entailment: require_probability(response, "prob", role); break;
    case Role::qg: {
        require_string(response, "question", role);
        auto q = response.at("question").get<std::string>();
        require(!text::trim(q).empty() && text::trim(q).back() == '?', role,
                "'question' must be non-empty and end with '?'");
        break;
    }
    case Role::qa:
        require(response.contains("answer") && (response.at("answer").is_string() || response.at("answer").is_null()),
                role, "'answer' must be a string or null");
        break;
    case Role::qa2d: {
        require_string(response, "declarative", role);
        auto declarative = response.at("declarative").get<std::string>();
        auto d = text::trim(declarative);
        require(!d.empty() && d.back() != '?', role, "'declarative' must be a non-empty non-question");
        break;
    }
    case Role::decontext: require_string(response, "output", role); break;
    case Role::checkworthy: {
        require_probability(response, "cfs", role);
        require_probability(response, "ufs", role);
        require_probability(response, "nfs", role);
        auto sum = response.at("cfs").get<double>() + response.at("ufs").get<double>()
            + response.at("nfs").get<double>();
        require(std::abs(sum - 1.0) <= 1e-6, role, "class probabilities must sum to 1");
        break;
    }
    }
}

auto with_metadata(json payload, std::string_view model_name, double latency_ms) -> json
{
    payload["model_name"] = std::string(model_name);
    payload["latency_ms"] = latency_ms;
    return payload;
}

// ---------------------------------------------------------------------------
// Response cache

ResponseCache::ResponseCache(std::filesystem::path path) : m_path(std::move(path))
{
    std::ifstream in(m_path);
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) {
            continue;
        }
        try {
            auto entry = json::parse(line);
            m_entries[entry.at("key").get<std::string>()] = entry.at("response");
        } catch (json::exception const&) {
            // A torn final line from an interrupted run; later lines still load.
            continue;
        }
    }
}

auto ResponseCache::key(Role role, json const& request) -> std::string
{
    auto hash = text::fnv1a64(std::string(to_string(role)) + "\n" + request.dump());
    std::ostringstream os;
    os << to_string(role) << ':' << std::hex << hash;
    return os.str();
}

auto ResponseCache::lookup(Role role, json const& request) const -> std::optional<json>
{
    std::shared_lock lock(m_mutex);
    auto it = m_entries.find(key(role, request));
    if (it == m_entries.end()) {
        return std::nullopt;
    }
    return std::optional<json>(std::in_place, it->second);
}

void ResponseCache::store(Role role, json const& request, json const& response)
{
    auto k = key(role, request);
    std::unique_lock lock(m_mutex);
    if (m_entries.contains(k)) {
        return;
    }
    m_entries[k] = response;
    std::ofstream out(m_path, std::ios::app);
    if (out) {
        json entry{{"key", k}, {"role", std::string(to_string(role))}, {"response", response}};
        out << entry.dump() << '\n';
    }
}

auto ResponseCache::size() const -> std::size_t
{
    std::shared_lock lock(m_mutex);
    return m_entries.size();
}

namespace {

class CachedBackend final : public Backend {
  public:
    CachedBackend(std::shared_ptr<Backend> inner, std::shared_ptr<ResponseCache> cache)
        : m_inner(std::move(inner)), m_cache(std::move(cache))
    {}

    [[nodiscard]] auto role() const -> Role override { return m_inner->role(); }

    [[nodiscard]] auto invoke(json const& request) -> json override
    {
        if (auto hit = m_cache->lookup(role(), request)) {
            return *hit;
        }
        auto response = m_inner->invoke(request);
        validate_response(role(), response);
        m_cache->store(role(), request, response);
        return response;
    }

  private:
    std::shared_ptr<Backend> m_inner;
    std::shared_ptr<ResponseCache> m_cache;
};

}  // namespace

auto make_cached_backend(std::shared_ptr<Backend> inner, std::shared_ptr<ResponseCache> cache)
    -> std::shared_ptr<Backend>
{
    return std::make_shared<CachedBackend>(std::move(inner), std::move(cache));
}

// ---------------------------------------------------------------------------
// Registry

auto BackendRegistry::with_references() -> BackendRegistry
{
    BackendRegistry registry;
    for (auto role: kAllRoles) {
        registry.register_backend(make_reference_backend(role));
    }
    return registry;
}

auto BackendRegistry::from_descriptor_file(std::filesystem::path const& path) -> BackendRegistry
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read backend descriptor file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (json::parse_error const& e) {
        throw FormatError("backend descriptor file " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("backends") || !doc.at("backends").is_object()) {
        throw FormatError("backend descriptor file must contain a 'backends' object");
    }
    std::shared_ptr<ResponseCache> cache;
    if (doc.contains("cache")) {
        std::filesystem::path cache_path = doc.at("cache").get<std::string>();
        if (cache_path.is_relative()) {
            cache_path = path.parent_path() / cache_path;
        }
        cache = std::make_shared<ResponseCache>(cache_path);
    }

    BackendRegistry registry;
    for (auto const& [name, entry]: doc.at("backends").items()) {
        BackendDescriptor d;
        d.role = parse_role(name);
        auto kind = entry.value("kind", std::string("reference"));
        if (kind == "reference") {
            d.kind = BackendKind::reference;
        } else if (kind == "remote") {
            d.kind = BackendKind::remote;
        } else {
            throw FormatError("backend '" + name + "': unknown kind '" + kind + "'");
        }
        d.endpoint = entry.value("endpoint", std::string{});
        d.timeout_seconds = entry.value("timeout_seconds", d.timeout_seconds);
        d.max_in_flight = entry.value("max_in_flight", d.max_in_flight);
        d.validate();
        if (d.kind == BackendKind::reference) {
            registry.register_backend(make_reference_backend(d.role));
        } else {
            auto remote = make_remote_backend(d);
            registry.register_backend(cache ? make_cached_backend(std::move(remote), cache) : std::move(remote));
        }
    }
    registry.require_complete();
    return registry;
}

auto BackendRegistry::from_environment() -> BackendRegistry
{
    // NOLINTNEXTLINE(concurrency-mt-unsafe): read once at startup.
    if (char const* path = std::getenv("CLAIMFORGE_BACKEND_CONFIG"); path != nullptr && *path != '\0') {
        return from_descriptor_file(path);
    }
    return with_references();
}

void BackendRegistry::register_backend(std::shared_ptr<Backend> backend)
{
    if (!backend) {
        throw InvalidArgument("cannot register a null backend");
    }
    auto role = backend->role();
    m_backends[role] = std::move(backend);
}

auto BackendRegistry::has(Role role) const -> bool { return m_backends.contains(role); }

auto BackendRegistry::missing_roles() const -> std::vector<Role>
{
    std::vector<Role> missing;
    for (auto role: kAllRoles) {
        if (!has(role)) {
            missing.push_back(role);
        }
    }
    return missing;
}

void BackendRegistry::require_complete() const
{
    auto missing = missing_roles();
    if (!missing.empty()) {
        throw BackendError(missing.front(), BackendErrorKind::unregistered,
                           std::to_string(missing.size()) + " role(s) lack a backend");
    }
}

auto BackendRegistry::invoke(Role role, json const& request) const -> json
{
    auto it = m_backends.find(role);
    if (it == m_backends.end()) {
        throw BackendError(role, BackendErrorKind::unregistered, "");
    }
    validate_request(role, request);
    json response;
    try {
        response = it->second->invoke(request);
    } catch (BackendError const&) {
        throw;
    } catch (std::exception const& e) {
        throw BackendError(role, BackendErrorKind::failure, e.what());
    }
    validate_response(role, response);
    return response;
}

auto BackendRegistry::summarize(std::vector<std::string> const& sentences) const -> std::vector<double>
{
    auto response = invoke(Role::summarizer, json{{"sentences", sentences}});
    return response.at("scores").get<std::vector<double>>();
}

auto BackendRegistry::entailment(std::string const& premise, std::string const& hypothesis) const -> double
{
    auto response = invoke(Role::entailment, json{{"premise", premise}, {"hypothesis", hypothesis}});
    return response.at("prob").get<double>();
}

auto BackendRegistry::generate_question(std::string const& sentence, std::string const& answer,
                                        std::string const& kind) const -> std::string
{
    json request{{"sentence", sentence}, {"answer", answer}};
    if (!kind.empty()) {
        request["kind"] = kind;
    }
    return invoke(Role::qg, request).at("question").get<std::string>();
}

auto BackendRegistry::answer_question(std::string const& question, std::vector<std::string> const& evidence) const
    -> std::optional<std::string>
{
    auto response = invoke(Role::qa, json{{"question", question}, {"evidence", evidence}});
    auto const& answer = response.at("answer");
    if (answer.is_null()) {
        return std::nullopt;
    }
    auto text = answer.get<std::string>();
    if (text::trim(text).empty()) {
        return std::nullopt;
    }
    return text;
}

auto BackendRegistry::to_declarative(std::string const& question, std::string const& answer) const -> std::string
{
    return invoke(Role::qa2d, json{{"question", question}, {"answer", answer}}).at("declarative").get<std::string>();
}

auto BackendRegistry::decontextualise(std::string const& input) const -> std::string
{
    return invoke(Role::decontext, json{{"input", input}}).at("output").get<std::string>();
}

auto BackendRegistry::classify(std::string const& text) const -> CheckworthinessScore
{
    auto response = invoke(Role::checkworthy, json{{"text", text}});
    return {response.at("cfs").get<double>(), response.at("ufs").get<double>(), response.at("nfs").get<double>()};
}

// ---------------------------------------------------------------------------

auto reference_entailment(std::string_view premise, std::string_view hypothesis) -> double
{
    auto content = [](std::string_view s) {
        auto tokens = text::content_tokens(s);
        return std::set<std::string>(tokens.begin(), tokens.end());
    };
    auto p = content(premise);
    auto h = content(hypothesis);
    if (h.empty()) {
        auto all = [](std::string_view s) {
            auto tokens = ir::tokenize(s);
            return std::set<std::string>(tokens.begin(), tokens.end());
        };
        return all(premise) == all(hypothesis) ? 1.0 : 0.0;
    }
    std::size_t shared = 0;
    for (auto const& t: h) {
        shared += p.count(t);
    }
    return static_cast<double>(shared) / static_cast<double>(h.size());
}

}  // namespace claimforge::backends
