#include "claimforge/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "claimforge/backends.hpp"
#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"

namespace claimforge::extraction {

namespace {

void require_sentences(corpus::Document const& document)
{
    if (document.size() == 0) {
        throw InvalidArgument("document '" + document.id + "' has no sentences");
    }
}

}  // namespace

auto to_string(Scorer scorer) -> std::string_view
{
    switch (scorer) {
    case Scorer::lead: return "lead";
    case Scorer::textrank: return "textrank";
    case Scorer::lsa: return "lsa";
    case Scorer::backend: return "backend";
    }
    return "unknown";
}

auto parse_scorer(std::string_view name) -> Scorer
{
    for (auto s: {Scorer::lead, Scorer::textrank, Scorer::lsa, Scorer::backend}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw InvalidArgument("unknown scorer '" + std::string(name) + "' (expected lead, textrank, lsa or backend)");
}

auto score_lead(corpus::Document const& document) -> std::vector<SentenceScore>
{
    require_sentences(document);
    std::vector<SentenceScore> out;
    out.reserve(document.size());
    for (std::size_t i = 0; i < document.size(); ++i) {
        out.push_back({i, 1.0 / static_cast<double>(i + 1), "lead"});
    }
    return out;
}

auto textrank_similarity(std::vector<std::string> const& a, std::vector<std::string> const& b) -> double
{
    if (a.size() < 2 || b.size() < 2) {
        return 0.0;
    }
    double denom = std::log(static_cast<double>(a.size())) + std::log(static_cast<double>(b.size()));
    if (denom <= 0.0) {
        return 0.0;
    }
    std::set<std::string> sa(a.begin(), a.end());
    std::set<std::string> sb(b.begin(), b.end());
    std::size_t shared = 0;
    for (auto const& t: sa) {
        shared += sb.count(t);
    }
    return static_cast<double>(shared) / denom;
}

auto score_textrank_detailed(corpus::Document const& document, TextRankParams const& params) -> TextRankResult
{
    require_sentences(document);
    if (params.damping < 0.0 || params.damping > 1.0) {
        throw InvalidArgument("textrank damping must lie in [0,1]");
    }
    auto n = document.size();
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(n);
    for (auto const& s: document.sentences) {
        tokens.push_back(ir::tokenize(s.text));
    }
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    std::vector<double> out_weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto s = textrank_similarity(tokens[i], tokens[j]);
            w[i][j] = s;
            w[j][i] = s;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out_weight[i] += w[i][j];
        }
    }

    auto d = params.damping;
    std::vector<double> x(n, 1.0);
    std::vector<double> next(n, 0.0);
    TextRankResult result;
    while (result.iterations < params.max_iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double incoming = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (w[j][i] > 0.0) {
                    incoming += w[j][i] / out_weight[j] * x[j];
                }
            }
            next[i] = (1.0 - d) + d * incoming;
            change = std::max(change, std::abs(next[i] - x[i]));
        }
        x.swap(next);
        ++result.iterations;
        if (change < params.tol) {
            result.converged = true;
            break;
        }
    }
    result.scores.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.scores.push_back({i, x[i], "textrank"});
    }
    return result;
}

auto score_textrank(corpus::Document const& document, TextRankParams const& params) -> std::vector<SentenceScore>
{
    return score_textrank_detailed(document, params).scores;
}

auto reference_summary_scores(std::vector<std::string> const& sentences) -> std::vector<double>
{
    std::vector<std::set<std::string>> content;
    content.reserve(sentences.size());
    std::unordered_map<std::string, std::size_t> sentence_freq;
    for (auto const& s: sentences) {
        auto tokens = text::content_tokens(s);
        auto& set = content.emplace_back(tokens.begin(), tokens.end());
        for (auto const& t: set) {
            ++sentence_freq[t];
        }
    }
    std::vector<double> scores;
    scores.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        double coverage = 0.0;
        if (!content[i].empty()) {
            std::size_t shared = 0;
            for (auto const& t: content[i]) {
                shared += sentence_freq[t] > 1 ? 1 : 0;
            }
            coverage = static_cast<double>(shared) / static_cast<double>(content[i].size());
        }
        auto prior = 1.0 / (1.0 + 0.2 * static_cast<double>(i));
        scores.push_back(prior * (0.5 + 0.5 * coverage));
    }
    return scores;
}

auto score_via_backend(corpus::Document const& document, backends::BackendRegistry const& registry)
    -> std::vector<SentenceScore>
{
    using backends::BackendError;
    using backends::BackendErrorKind;
    using backends::Role;
    require_sentences(document);
    auto raw = registry.summarize(document.texts());
    if (raw.size() != document.size()) {
        throw BackendError(Role::summarizer, BackendErrorKind::schema,
                           "expected " + std::to_string(document.size()) + " scores, got "
                               + std::to_string(raw.size()));
    }
    std::vector<SentenceScore> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i]) || raw[i] < 0.0 || raw[i] > 1.0) {
            throw BackendError(Role::summarizer, BackendErrorKind::schema,
                               "score " + std::to_string(i) + " outside [0,1]");
        }
        out.push_back({i, raw[i], "backend"});
    }
    return out;
}

auto score_sentences(corpus::Document const& document, ScorerOptions const& options,
                     backends::BackendRegistry const& registry) -> std::vector<SentenceScore>
{
    switch (options.scorer) {
    case Scorer::lead: return score_lead(document);
    case Scorer::textrank: return score_textrank(document, options.textrank);
    case Scorer::lsa: {
        auto topics = options.lsa_topics != 0 ? options.lsa_topics : std::min(options.k, document.size());
        return score_lsa(document, std::max<std::size_t>(topics, 1));
    }
    case Scorer::backend: return score_via_backend(document, registry);
    }
    throw InvalidArgument("unknown scorer");
}

auto rank_sentences(std::vector<SentenceScore> const& scores) -> RankedSentences
{
    std::set<std::size_t> seen;
    for (auto const& s: scores) {
        if (!seen.insert(s.index).second) {
            throw InvalidArgument("duplicate sentence index " + std::to_string(s.index) + " in scores");
        }
    }
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end(), [](auto const& a, auto const& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.index < b.index;
    });
    RankedSentences ranked;
    ranked.ordering.reserve(sorted.size());
    for (auto const& s: sorted) {
        ranked.ordering.push_back(s.index);
    }
    return ranked;
}

auto dedup_topk(RankedSentences const& ranked, corpus::Document const& document, EntailmentFn const& entailment,
                std::size_t k, double threshold) -> CentralSentences
{
    if (k == 0) {
        throw InvalidArgument("dedup_topk: k must be >= 1");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidArgument("dedup_topk: threshold must lie in (0,1)");
    }
    CentralSentences central;
    central.k = k;
    central.entailment_threshold = threshold;
    for (auto candidate: ranked.ordering) {
        if (central.selected.size() == k) {
            break;
        }
        auto const& c = document.sentence(candidate);
        bool redundant = false;
        for (auto accepted: central.selected) {
            auto const& a = document.sentence(accepted);
            if (entailment(a, c) >= threshold || entailment(c, a) >= threshold) {
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            central.selected.push_back(candidate);
        }
    }
    return central;
}

auto dedup_topk(RankedSentences const& ranked, corpus::Document const& document,
                backends::BackendRegistry const& registry, std::size_t k, double threshold) -> CentralSentences
{
    return dedup_topk(
        ranked, document,
        [&registry](std::string const& premise, std::string const& hypothesis) {
            return registry.entailment(premise, hypothesis);
        },
        k, threshold);
}

}  // namespace claimforge::extraction
