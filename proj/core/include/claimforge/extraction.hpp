#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "claimforge/corpus.hpp"

namespace claimforge::backends {
class BackendRegistry;
}

namespace claimforge::extraction {

struct SentenceScore {
    std::size_t index = 0;
    double score = 0.0;
    std::string scorer_name;

    friend auto operator==(SentenceScore const&, SentenceScore const&) -> bool = default;
};

/// Sentence indices by score descending, ties by ascending index.
struct RankedSentences {
    std::vector<std::size_t> ordering;

    friend auto operator==(RankedSentences const&, RankedSentences const&) -> bool = default;
};

struct CentralSentences {
    std::vector<std::size_t> selected;
    std::size_t k = 3;
    double entailment_threshold = 0.5;
};

enum class Scorer : std::uint8_t { lead, textrank, lsa, backend };

[[nodiscard]] auto to_string(Scorer scorer) -> std::string_view;
/// Throws InvalidArgument for names other than lead, textrank, lsa, backend.
[[nodiscard]] auto parse_scorer(std::string_view name) -> Scorer;

/// score = 1 / (index + 1).
[[nodiscard]] auto score_lead(corpus::Document const& document) -> std::vector<SentenceScore>;

struct TextRankParams {
    double damping = 0.85;
    double tol = 1e-4;
    std::size_t max_iter = 100;
};

struct TextRankResult {
    std::vector<SentenceScore> scores;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Edge weight between two token sequences:
/// |distinct shared tokens| / (ln|a| + ln|b|), 0 when the denominator is not
/// positive or nothing is shared.
[[nodiscard]] auto textrank_similarity(std::vector<std::string> const& a, std::vector<std::string> const& b)
    -> double;

/// Weighted PageRank over the sentence similarity graph, starting from all
/// ones and iterating
///     x_i <- (1 - d) + d * sum_j w_ji / W_j * x_j      (W_j = sum_k w_jk)
/// until the largest change drops below tol or max_iter is reached.
[[nodiscard]] auto score_textrank_detailed(corpus::Document const& document, TextRankParams const& params = {})
    -> TextRankResult;
[[nodiscard]] auto score_textrank(corpus::Document const& document, TextRankParams const& params = {})
    -> std::vector<SentenceScore>;

/// Latent semantic analysis over the content-token frequency matrix (terms x
/// sentences). Topic r (by descending singular value) awards 1/(r+1) to the
/// not yet chosen sentence with the largest |V(i, r)|, ties to the lower
/// index. Topics beyond the matrix rank award nothing.
[[nodiscard]] auto score_lsa(corpus::Document const& document, std::size_t topics)
    -> std::vector<SentenceScore>;

/// Per-sentence scores from the summarizer backend. Throws BackendError
/// (schema) when the count or range is wrong.
[[nodiscard]] auto score_via_backend(corpus::Document const& document, backends::BackendRegistry const& registry)
    -> std::vector<SentenceScore>;

/// The reference summarizer:
///     score_i = 1 / (1 + 0.2 i) * (0.5 + 0.5 coverage_i)
/// coverage_i being the fraction of the sentence's distinct content tokens
/// that occur in some other sentence (0 for a sentence without any).
[[nodiscard]] auto reference_summary_scores(std::vector<std::string> const& sentences) -> std::vector<double>;

struct ScorerOptions {
    Scorer scorer = Scorer::backend;
    TextRankParams textrank;
    /// 0 means min(k, sentence count).
    std::size_t lsa_topics = 0;
    std::size_t k = 3;
};

[[nodiscard]] auto score_sentences(corpus::Document const& document, ScorerOptions const& options,
                                   backends::BackendRegistry const& registry) -> std::vector<SentenceScore>;

/// Throws InvalidArgument on duplicate indices.
[[nodiscard]] auto rank_sentences(std::vector<SentenceScore> const& scores) -> RankedSentences;

/// Probability that the first text entails the second.
using EntailmentFn = std::function<double(std::string const&, std::string const&)>;

/// Greedy redundancy removal: walk the ranking, accept a sentence unless it
/// entails or is entailed by (probability >= threshold) an accepted one, stop
/// at k. Acceptance order is kept, so the result for k is a prefix of the
/// result for any larger k.
[[nodiscard]] auto dedup_topk(RankedSentences const& ranked, corpus::Document const& document,
                              EntailmentFn const& entailment, std::size_t k, double threshold)
    -> CentralSentences;
[[nodiscard]] auto dedup_topk(RankedSentences const& ranked, corpus::Document const& document,
                              backends::BackendRegistry const& registry, std::size_t k, double threshold)
    -> CentralSentences;

}  // namespace claimforge::extraction
