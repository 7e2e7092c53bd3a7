#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "claimforge/backends.hpp"
#include "claimforge/decontext.hpp"

namespace claimforge::checkworthy {

using backends::CheckworthinessScore;

struct ClaimSelection {
    std::string claim_text;
    std::size_t source_sentence_index = 0;
    double cfs_score = 0.0;
    /// (source index, cfs) for every candidate, in input order.
    std::vector<std::pair<std::size_t, double>> candidate_scores;
};

/// Throws InvalidArgument for empty text.
[[nodiscard]] auto classify(std::string const& text, backends::BackendRegistry const& registry)
    -> CheckworthinessScore;

/// Argmax of cfs over the candidates' texts; ties go to the lowest source
/// index. Throws InvalidArgument for an empty list.
[[nodiscard]] auto select_claim(std::vector<decontext::DecontextResult> const& candidates,
                                backends::BackendRegistry const& registry) -> ClaimSelection;
/// Same selection over precomputed scores (one per candidate).
[[nodiscard]] auto select_claim(std::vector<decontext::DecontextResult> const& candidates,
                                std::vector<CheckworthinessScore> const& scores) -> ClaimSelection;

/// The reference classifier. Raw masses
///     cfs = 0.1 + 0.5 [digit] + 0.3 [quantity word] + 0.1 min(name runs, 3)
///               + 0.2 [reporting/factive word]
///     nfs = 0.1 + 1.0 [ends with ?] + 0.6 [ends with !]
///               + 0.5 [first person or opinion marker]
///     ufs = max(0.1, 1 - cfs - nfs)
/// normalized to sum to one.
[[nodiscard]] auto reference_classify(std::string_view text) -> CheckworthinessScore;

}  // namespace claimforge::checkworthy
