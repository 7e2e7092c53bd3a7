#include "claimforge/checkworthy.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"

namespace claimforge::checkworthy {

namespace {

using WordSet = std::unordered_set<std::string_view>;

auto const& quantity_words()
{
    static WordSet const set{"hundred",  "hundreds", "thousand", "thousands", "million", "millions",
                             "billion",  "billions", "trillion", "trillions", "dozen",   "dozens",
                             "percent",  "percentage", "twice",  "double",    "triple",  "half"};
    return set;
}

auto const& factive_words()
{
    static WordSet const set{"said",    "says",     "announced", "reported", "confirmed", "according",
                             "stated",  "revealed", "claimed",   "showed",   "found",     "estimated",
                             "declared", "testified"};
    return set;
}

auto const& opinion_markers()
{
    static WordSet const set{"i",     "me",      "my",    "we",        "our",     "us",
                             "think", "believe", "feel",  "opinion",   "hope",    "wish",
                             "love",  "hate",    "awesome", "terrible", "amazing", "wonderful",
                             "personally", "lol"};
    return set;
}

auto final_char(std::string_view s) -> char
{
    s = text::trim(s);
    while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == ')' || s.back() == ']')) {
        s.remove_suffix(1);
    }
    return s.empty() ? '\0' : s.back();
}

}  // namespace

auto reference_classify(std::string_view input) -> CheckworthinessScore
{
    auto tokens = ir::tokenize(input);
    auto any_of = [&](WordSet const& set) {
        return std::any_of(tokens.begin(), tokens.end(), [&](auto const& t) { return set.contains(t); });
    };
    bool digit = std::any_of(input.begin(), input.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
    auto names = text::name_runs(text::words(input)).size();

    double cfs = 0.1;
    cfs += digit ? 0.5 : 0.0;
    cfs += any_of(quantity_words()) ? 0.3 : 0.0;
    cfs += 0.1 * static_cast<double>(std::min<std::size_t>(names, 3));
    cfs += any_of(factive_words()) ? 0.2 : 0.0;

    double nfs = 0.1;
    auto last = final_char(input);
    nfs += last == '?' ? 1.0 : 0.0;
    nfs += last == '!' ? 0.6 : 0.0;
    nfs += any_of(opinion_markers()) ? 0.5 : 0.0;

    double ufs = std::max(0.1, 1.0 - cfs - nfs);
    double total = cfs + nfs + ufs;
    CheckworthinessScore score{cfs / total, ufs / total, nfs / total};
    // Make the three values sum to one exactly in floating point.
    score.ufs = 1.0 - score.cfs - score.nfs;
    return score;
}

auto classify(std::string const& input, backends::BackendRegistry const& registry) -> CheckworthinessScore
{
    if (text::trim(input).empty()) {
        throw InvalidArgument("cannot classify empty text");
    }
    return registry.classify(input);
}

auto select_claim(std::vector<decontext::DecontextResult> const& candidates,
                  std::vector<CheckworthinessScore> const& scores) -> ClaimSelection
{
    if (candidates.empty()) {
        throw InvalidArgument("select_claim needs at least one candidate");
    }
    if (scores.size() != candidates.size()) {
        throw InvalidArgument("select_claim: one score per candidate required");
    }
    ClaimSelection selection;
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        selection.candidate_scores.emplace_back(candidates[i].original_index, scores[i].cfs);
        if (i == 0) {
            continue;
        }
        auto const& b = candidates[best];
        if (scores[i].cfs > scores[best].cfs
            || (scores[i].cfs == scores[best].cfs && candidates[i].original_index < b.original_index)) {
            best = i;
        }
    }
    selection.claim_text = candidates[best].text;
    selection.source_sentence_index = candidates[best].original_index;
    selection.cfs_score = scores[best].cfs;
    return selection;
}

auto select_claim(std::vector<decontext::DecontextResult> const& candidates,
                  backends::BackendRegistry const& registry) -> ClaimSelection
{
    if (candidates.empty()) {
        throw InvalidArgument("select_claim needs at least one candidate");
    }
    std::vector<CheckworthinessScore> scores;
    scores.reserve(candidates.size());
    for (auto const& c: candidates) {
        scores.push_back(classify(c.text, registry));
    }
    return select_claim(candidates, scores);
}

}  // namespace claimforge::checkworthy
