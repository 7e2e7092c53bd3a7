#include "claimforge/ir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "claimforge/error.hpp"
#include "claimforge/text.hpp"

namespace claimforge::ir {

auto tokenize(std::string_view text) -> std::vector<std::string>
{
    std::vector<std::string> tokens;
    for (auto const& chunk: text::split_whitespace(text)) {
        auto core = text::strip_punctuation(chunk);
        if (!core.empty()) {
            tokens.push_back(text::to_lower(core));
        }
    }
    return tokens;
}

auto Bm25Index::build(std::vector<std::string> const& units, Bm25Params params) -> Bm25Index
{
    if (units.empty()) {
        throw InvalidArgument("bm25: cannot build an index over zero units");
    }
    Bm25Index index;
    index.m_params = params;
    index.m_units.reserve(units.size());
    std::size_t total_len = 0;
    for (std::size_t id = 0; id < units.size(); ++id) {
        TokenizedUnit unit;
        unit.unit_id = id;
        unit.tokens = tokenize(units[id]);
        for (auto const& t: unit.tokens) {
            ++unit.term_freq[t];
        }
        for (auto const& [term, _]: unit.term_freq) {
            ++index.m_doc_freq[term];
        }
        total_len += unit.tokens.size();
        index.m_units.push_back(std::move(unit));
    }
    index.m_avg_len = static_cast<double>(total_len) / static_cast<double>(units.size());
    return index;
}

auto Bm25Index::unit(std::size_t id) const -> TokenizedUnit const&
{
    if (id >= m_units.size()) {
        throw InvalidArgument("bm25: unknown unit id " + std::to_string(id));
    }
    return m_units[id];
}

auto Bm25Index::doc_freq(std::string const& term) const -> std::size_t
{
    auto it = m_doc_freq.find(term);
    return it == m_doc_freq.end() ? 0 : it->second;
}

auto Bm25Index::idf(std::string const& term) const -> double
{
    auto n = static_cast<double>(m_units.size());
    auto df = static_cast<double>(doc_freq(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

auto Bm25Index::score_tokens(std::vector<std::string> const& query, std::size_t unit_id) const -> double
{
    auto const& u = unit(unit_id);
    // avg_len is zero only when every unit is empty, and then no term matches.
    double norm = m_avg_len > 0.0 ? static_cast<double>(u.length()) / m_avg_len : 0.0;
    double denom_len = m_params.k1 * (1.0 - m_params.b + m_params.b * norm);
    double score = 0.0;
    for (auto const& term: query) {
        auto it = u.term_freq.find(term);
        if (it == u.term_freq.end()) {
            continue;
        }
        auto tf = static_cast<double>(it->second);
        score += idf(term) * tf * (m_params.k1 + 1.0) / (tf + denom_len);
    }
    return score;
}

auto Bm25Index::score(std::string_view query, std::size_t unit_id) const -> double
{
    return score_tokens(tokenize(query), unit_id);
}

auto Bm25Index::retrieve(std::string_view query, std::size_t k) const -> RetrievalResult
{
    if (k == 0) {
        throw InvalidArgument("bm25: retrieve requires k >= 1");
    }
    auto tokens = tokenize(query);
    RetrievalResult all;
    all.reserve(m_units.size());
    for (std::size_t id = 0; id < m_units.size(); ++id) {
        all.push_back({id, score_tokens(tokens, id)});
    }
    auto keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                      [](ScoredUnit const& lhs, ScoredUnit const& rhs) {
                          if (lhs.score != rhs.score) {
                              return lhs.score > rhs.score;
                          }
                          return lhs.unit_id < rhs.unit_id;
                      });
    all.resize(keep);
    return all;
}

}  // namespace claimforge::ir
