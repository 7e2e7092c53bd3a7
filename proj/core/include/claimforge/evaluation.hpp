#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimforge/corpus.hpp"
#include "claimforge/decontext.hpp"

namespace claimforge::evaluation {

struct ChrfParams {
    std::size_t max_n = 6;
    double beta = 2.0;

    /// Throws InvalidArgument unless max_n >= 1 and beta > 0.
    void validate() const;
};

/// Character n-gram F-score in [0, 100].
///
/// Both strings are whitespace-collapsed; spaces take part in n-grams and
/// characters are Unicode code points. For each order n the clipped
/// precision P and recall R give
///     F_n = (1 + beta^2) P R / (beta^2 P + R)
/// and the score is 100 times the mean of F_n over the orders at which both
/// strings have at least one n-gram. Two empty strings score 100, one empty
/// string scores 0.
[[nodiscard]] auto chrf(std::string_view hypothesis, std::string_view reference, ChrfParams const& params = {})
    -> double;

/// Sentence-level SARI in [0, 100] over word n-grams of order 1-4.
///
/// For each order, with S, C and R the n-gram multisets of source,
/// hypothesis and (pooled) references, and S, C scaled by the number of
/// references:
///     keep    F1 of keep precision and keep recall, where kept = S & C,
///             precision = mean over kept of min(kept, R) / kept and
///             recall = mean over S & R of min(kept, R) / (S & R)
///     delete  precision: mean over deleted = S - C of (deleted - R) / deleted
///     add     F1 over sets: added = C \ S against wanted = R \ S
/// A component whose relevant sets are both empty (nothing done and nothing
/// to do) scores 1; any other empty denominator scores 0. SARI is 100 times
/// the mean of the three components averaged over the orders.
/// Throws InvalidArgument for an empty reference list.
[[nodiscard]] auto sari(std::string_view source, std::string_view hypothesis,
                        std::vector<std::string> const& references) -> double;

/// Index of the sentence with the highest chrF against the gold claim,
/// lowest index on ties.
[[nodiscard]] auto proxy_gold_sentence(corpus::Document const& document, std::string_view gold_claim,
                                       ChrfParams const& params = {}) -> std::size_t;

struct MetricReport {
    std::string name;
    double aggregate = 0.0;
    std::vector<std::size_t> k_values;
    std::vector<std::pair<std::string, double>> per_item;
    std::string note;
};

/// JSON object with keys name, aggregate, k_values, per_item (and note when set).
[[nodiscard]] auto to_json(MetricReport const& report) -> nlohmann::ordered_json;
[[nodiscard]] auto report_from_json(nlohmann::json const& j) -> MetricReport;

/// True when the top-k prefix of `ranked` contains `gold`.
[[nodiscard]] auto hit_at_k(std::vector<std::size_t> const& ranked, std::size_t gold, std::size_t k) -> bool;

struct RankedItem {
    std::string id;
    std::vector<std::size_t> ranked;
    std::size_t gold = 0;
};

inline std::vector<std::size_t> const kDefaultKs{1, 3, 5, 10};

/// One report per k: per-item 0/1 hit indicators, aggregate = 100 * mean.
/// Throws NoDataError for no items, InvalidArgument for k = 0, and Error if
/// the aggregates are not non-decreasing in k.
[[nodiscard]] auto precision_at_k(std::vector<RankedItem> const& items, std::vector<std::size_t> const& ks,
                                  std::string const& prefix = "P") -> std::vector<MetricReport>;

/// Fails with Error unless the reports' aggregates are non-decreasing in k.
void check_monotone(std::vector<MetricReport> const& reports);

struct EvidenceSet {
    std::string claim_id;
    std::vector<std::string> units;
    std::vector<std::size_t> gold_ids;

    /// Throws InvalidArgument unless there are units and gold ids are
    /// non-empty and in range.
    void validate() const;
};

[[nodiscard]] auto read_evidence(std::istream& in) -> std::vector<EvidenceSet>;
[[nodiscard]] auto load_evidence(std::filesystem::path const& path) -> std::vector<EvidenceSet>;

/// Query texts per claim: {"claim_id": ..., "variants": {"name": "text", ...}}.
struct ClaimVariants {
    std::string claim_id;
    std::map<std::string, std::string> variants;
};

[[nodiscard]] auto read_claim_variants(std::istream& in) -> std::vector<ClaimVariants>;
[[nodiscard]] auto load_claim_variants(std::filesystem::path const& path) -> std::vector<ClaimVariants>;

/// Fraction of the top-k BM25 results (k in the denominator) that are gold.
[[nodiscard]] auto retrieval_precision(std::string_view query, EvidenceSet const& evidence, std::size_t k)
    -> double;

/// For every variant and k: mean precision over the claims, times 100. Claims
/// are matched to evidence by id; a claim without evidence throws
/// InvalidArgument. Reports are named "retrieval.<variant>.P@<k>".
[[nodiscard]] auto retrieval_eval(std::vector<ClaimVariants> const& claims, std::vector<EvidenceSet> const& evidence,
                                  std::vector<std::size_t> const& ks) -> std::vector<MetricReport>;

struct CategoryCounts {
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
    std::size_t unnecessary = 0;

    [[nodiscard]] auto total() const -> std::size_t { return feasible + infeasible + unnecessary; }
    friend auto operator==(CategoryCounts const&, CategoryCounts const&) -> bool = default;
};

[[nodiscard]] auto category_stats(std::vector<decontext::DecontextResult> const& results) -> CategoryCounts;

}  // namespace claimforge::evaluation
