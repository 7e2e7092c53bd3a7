#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimforge/error.hpp"

namespace claimforge::backends {

using json = nlohmann::json;

/// The learned components a pipeline run needs. Each maps to one wire schema:
///
///   summarizer   {sentences: [string]}          -> {scores: [real]}
///   entailment   {premise, hypothesis}          -> {prob: real}
///   qg           {sentence, answer[, kind]}     -> {question}
///   qa           {question, evidence: [string]} -> {answer: string | null}
///   qa2d         {question, answer}             -> {declarative}
///   decontext    {input}                        -> {output}
///   checkworthy  {text}                         -> {cfs, ufs, nfs}
///
/// Every response also carries `model_name` (string) and `latency_ms` (>= 0).
enum class Role : std::uint8_t { summarizer, entailment, qg, qa, qa2d, decontext, checkworthy };

inline constexpr std::array<Role, 7> kAllRoles{Role::summarizer, Role::entailment, Role::qg, Role::qa,
                                               Role::qa2d,       Role::decontext,  Role::checkworthy};

[[nodiscard]] auto to_string(Role role) -> std::string_view;
[[nodiscard]] auto parse_role(std::string_view name) -> Role;

enum class BackendKind : std::uint8_t { reference, remote };

struct BackendDescriptor {
    Role role = Role::summarizer;
    BackendKind kind = BackendKind::reference;
    std::string endpoint;
    double timeout_seconds = 30.0;
    std::size_t max_in_flight = 4;

    /// Throws InvalidArgument when a remote descriptor has no usable endpoint.
    void validate() const;
};

enum class BackendErrorKind : std::uint8_t { timeout, transport, malformed, schema, failure, unregistered };

[[nodiscard]] auto to_string(BackendErrorKind kind) -> std::string_view;

class BackendError : public Error {
  public:
    BackendError(Role role, BackendErrorKind kind, std::string const& detail);

    [[nodiscard]] auto role() const -> Role { return m_role; }
    [[nodiscard]] auto kind() const -> BackendErrorKind { return m_kind; }

  private:
    Role m_role;
    BackendErrorKind m_kind;
};

/// Throws BackendError(schema) unless `request` matches the role's request schema.
void validate_request(Role role, json const& request);
/// Throws BackendError(schema) unless `response` matches the role's response schema.
void validate_response(Role role, json const& response);

/// One implementation of one role. Implementations must be safe to call from
/// several threads at once.
class Backend {
  public:
    Backend() = default;
    Backend(Backend const&) = delete;
    auto operator=(Backend const&) -> Backend& = delete;
    Backend(Backend&&) = delete;
    auto operator=(Backend&&) -> Backend& = delete;
    virtual ~Backend() = default;

    [[nodiscard]] virtual auto role() const -> Role = 0;
    [[nodiscard]] virtual auto invoke(json const& request) -> json = 0;
};

/// Memo of remote responses keyed by (role, request). Backed by an
/// append-only JSONL file; reads are concurrent, writes serialized.
class ResponseCache {
  public:
    explicit ResponseCache(std::filesystem::path path);

    [[nodiscard]] auto lookup(Role role, json const& request) const -> std::optional<json>;
    void store(Role role, json const& request, json const& response);
    [[nodiscard]] auto size() const -> std::size_t;

    [[nodiscard]] static auto key(Role role, json const& request) -> std::string;

  private:
    std::filesystem::path m_path;
    mutable std::shared_mutex m_mutex;
    std::unordered_map<std::string, json> m_entries;
};

/// JSON-over-HTTP client: one POST of the request payload per call.
[[nodiscard]] auto make_remote_backend(BackendDescriptor const& descriptor) -> std::shared_ptr<Backend>;

/// Wraps `inner` so that repeated requests are answered from `cache`.
[[nodiscard]] auto make_cached_backend(std::shared_ptr<Backend> inner, std::shared_ptr<ResponseCache> cache)
    -> std::shared_ptr<Backend>;

/// The bundled deterministic implementation of a role.
[[nodiscard]] auto make_reference_backend(Role role) -> std::shared_ptr<Backend>;

struct CheckworthinessScore {
    double cfs = 0.0;
    double ufs = 0.0;
    double nfs = 0.0;

    friend auto operator==(CheckworthinessScore const&, CheckworthinessScore const&) -> bool = default;
};

/// Role -> backend table plus typed calls that validate both directions of
/// every exchange. Registration happens before use; calls are thread-safe.
class BackendRegistry {
  public:
    /// All seven roles bound to their reference implementations.
    [[nodiscard]] static auto with_references() -> BackendRegistry;

    /// Descriptor file (JSON):
    ///   {"cache": "responses.jsonl",              (optional)
    ///    "backends": {"summarizer": {"kind": "reference"},
    ///                 "qa": {"kind": "remote", "endpoint": "http://host:port/qa",
    ///                        "timeout_seconds": 20, "max_in_flight": 4}, ...}}
    /// Every role must be listed. Remote backends are wrapped by the cache
    /// when one is configured.
    [[nodiscard]] static auto from_descriptor_file(std::filesystem::path const& path) -> BackendRegistry;

    /// Descriptor file named by CLAIMFORGE_BACKEND_CONFIG, else references.
    [[nodiscard]] static auto from_environment() -> BackendRegistry;

    void register_backend(std::shared_ptr<Backend> backend);
    [[nodiscard]] auto has(Role role) const -> bool;
    [[nodiscard]] auto missing_roles() const -> std::vector<Role>;
    /// Throws BackendError(unregistered) naming the first missing role.
    void require_complete() const;

    /// Validated round trip through the backend bound to `role`.
    [[nodiscard]] auto invoke(Role role, json const& request) const -> json;

    [[nodiscard]] auto summarize(std::vector<std::string> const& sentences) const -> std::vector<double>;
    [[nodiscard]] auto entailment(std::string const& premise, std::string const& hypothesis) const -> double;
    [[nodiscard]] auto generate_question(std::string const& sentence, std::string const& answer,
                                         std::string const& kind) const -> std::string;
    [[nodiscard]] auto answer_question(std::string const& question,
                                       std::vector<std::string> const& evidence) const
        -> std::optional<std::string>;
    [[nodiscard]] auto to_declarative(std::string const& question, std::string const& answer) const
        -> std::string;
    [[nodiscard]] auto decontextualise(std::string const& input) const -> std::string;
    [[nodiscard]] auto classify(std::string const& text) const -> CheckworthinessScore;

  private:
    std::unordered_map<Role, std::shared_ptr<Backend>> m_backends;
};

/// Wraps a response payload with the metadata every response carries.
[[nodiscard]] auto with_metadata(json payload, std::string_view model_name, double latency_ms = 0.0) -> json;

/// Containment of the hypothesis' content tokens in the premise:
/// |C(premise) ∩ C(hypothesis)| / |C(hypothesis)|, content tokens being the
/// distinct lowercase tokens outside the stop list. When the hypothesis has
/// no content tokens the score is 1 if both normalized token sets are equal
/// and 0 otherwise. Callers wanting symmetry take the max of both directions.
[[nodiscard]] auto reference_entailment(std::string_view premise, std::string_view hypothesis) -> double;

}  // namespace claimforge::backends
