#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace claimforge::ir {

/// Lowercased, whitespace-split tokens with leading/trailing punctuation
/// removed. Internal punctuation survives ("e-scooters", "d.c").
[[nodiscard]] auto tokenize(std::string_view text) -> std::vector<std::string>;

struct TokenizedUnit {
    std::size_t unit_id = 0;
    std::vector<std::string> tokens;
    std::unordered_map<std::string, std::size_t> term_freq;

    [[nodiscard]] auto length() const -> std::size_t { return tokens.size(); }
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct ScoredUnit {
    std::size_t unit_id = 0;
    double score = 0.0;

    friend auto operator==(ScoredUnit const&, ScoredUnit const&) -> bool = default;
};

/// Sorted by score descending, ties by ascending unit id.
using RetrievalResult = std::vector<ScoredUnit>;

/// Okapi BM25 over a fixed set of text units.
///
///     score(q, u) = sum_{t in q} idf(t) * tf(t,u) * (k1 + 1)
///                   / (tf(t,u) + k1 * (1 - b + b * |u| / avg_len))
///     idf(t)      = ln(1 + (N - df(t) + 0.5) / (df(t) + 0.5))
///
/// Every occurrence of a query term contributes, so "x x" scores twice "x".
/// The index is immutable once built and safe to query from several threads.
class Bm25Index {
  public:
    [[nodiscard]] static auto build(std::vector<std::string> const& units, Bm25Params params = {})
        -> Bm25Index;

    [[nodiscard]] auto score(std::string_view query, std::size_t unit_id) const -> double;
    [[nodiscard]] auto score_tokens(std::vector<std::string> const& query, std::size_t unit_id) const
        -> double;

    /// Top min(k, N) units; zero-score units are included.
    [[nodiscard]] auto retrieve(std::string_view query, std::size_t k) const -> RetrievalResult;

    [[nodiscard]] auto idf(std::string const& term) const -> double;
    [[nodiscard]] auto doc_freq(std::string const& term) const -> std::size_t;
    [[nodiscard]] auto size() const -> std::size_t { return m_units.size(); }
    [[nodiscard]] auto avg_len() const -> double { return m_avg_len; }
    [[nodiscard]] auto params() const -> Bm25Params const& { return m_params; }
    [[nodiscard]] auto unit(std::size_t id) const -> TokenizedUnit const&;

  private:
    Bm25Index() = default;

    std::vector<TokenizedUnit> m_units;
    std::unordered_map<std::string, std::size_t> m_doc_freq;
    double m_avg_len = 0.0;
    Bm25Params m_params;
};

}  // namespace claimforge::ir
