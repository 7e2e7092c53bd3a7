#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimforge::text {

[[nodiscard]] auto trim(std::string_view s) -> std::string_view;

/// Trims and replaces every whitespace run with a single ASCII space.
[[nodiscard]] auto collapse_whitespace(std::string_view s) -> std::string;

[[nodiscard]] auto to_lower(std::string_view s) -> std::string;

[[nodiscard]] auto split_whitespace(std::string_view s) -> std::vector<std::string>;

[[nodiscard]] auto join(std::vector<std::string> const& parts, std::string_view sep) -> std::string;

[[nodiscard]] auto is_space(char c) -> bool;

/// Removes leading and trailing punctuation (ASCII and common UTF-8 quotes,
/// dashes and ellipses).
[[nodiscard]] auto strip_punctuation(std::string_view s) -> std::string_view;

/// A whitespace-delimited word with edge punctuation removed.
///
/// `begin`/`end` are byte offsets into the analysed string. A word that ends in
/// an initialism such as "D.C." keeps its final period. `boundary_after` is set
/// when punctuation was stripped from the right edge, i.e. a comma or sentence
/// terminator separates this word from the next.
struct Word {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
    bool boundary_after = false;
    bool boundary_before = false;
};

[[nodiscard]] auto words(std::string_view s) -> std::vector<Word>;

// Closed-class lexicon shared by the reference analyzer, QA and classifier.
// All lookups take lowercase input.
[[nodiscard]] auto is_stopword(std::string_view lower) -> bool;
[[nodiscard]] auto is_pronoun(std::string_view lower) -> bool;
[[nodiscard]] auto is_determiner(std::string_view lower) -> bool;
[[nodiscard]] auto is_auxiliary(std::string_view lower) -> bool;
[[nodiscard]] auto is_preposition(std::string_view lower) -> bool;
[[nodiscard]] auto is_common_verb(std::string_view lower) -> bool;

/// Word starts with an uppercase ASCII letter.
[[nodiscard]] auto is_capitalized(std::string_view word) -> bool;

/// Capitalized and not a function word or pronoun; the named-entity heuristic.
[[nodiscard]] auto is_name_like(std::string_view word) -> bool;

/// Lowercase word that looks like a verb: closed list or an "-ed" form.
[[nodiscard]] auto is_verb_like(std::string_view word) -> bool;

/// Maximal runs of name-like words not separated by punctuation, as
/// [first, last] word indices.
[[nodiscard]] auto name_runs(std::vector<Word> const& ws)
    -> std::vector<std::pair<std::size_t, std::size_t>>;

/// Lowercased, punctuation-stripped tokens with stopwords removed.
[[nodiscard]] auto content_tokens(std::string_view s) -> std::vector<std::string>;

/// 64-bit FNV-1a, stable across runs and platforms.
[[nodiscard]] auto fnv1a64(std::string_view s) -> std::uint64_t;

}  // namespace claimforge::text
