#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "claimforge/contextgen.hpp"
#include "claimforge/corpus.hpp"

namespace claimforge::backends {
class BackendRegistry;
}

namespace claimforge::decontext {

enum class Category : std::uint8_t { feasible, infeasible, unnecessary };

[[nodiscard]] auto to_string(Category category) -> std::string_view;
[[nodiscard]] auto parse_category(std::string_view name) -> std::optional<Category>;

inline constexpr std::string_view kCls = "[CLS] ";
inline constexpr std::string_view kSep = " [SEP] ";

/// For infeasible and unnecessary results `text` is the original sentence.
struct DecontextResult {
    Category category = Category::unnecessary;
    std::string text;
    std::size_t original_index = 0;
    /// Set when the backend output could not be parsed as-is.
    std::string warning;

    friend auto operator==(DecontextResult const&, DecontextResult const&) -> bool = default;
};

/// "[CLS] " + declaratives joined by " [SEP] " + " [SEP] " + sentence, or
/// "[CLS] " + sentence without context.
[[nodiscard]] auto format_decontext_input(std::vector<std::string> const& declaratives, std::string_view sentence)
    -> std::string;
[[nodiscard]] auto format_decontext_input(contextgen::ContextSet const& context, std::string_view sentence)
    -> std::string;

struct ParsedOutput {
    Category category = Category::infeasible;
    std::string text;
    std::string warning;
};

/// Splits "CAT [SEP] text" on the first separator. An unknown category
/// yields (infeasible, "") with a warning.
[[nodiscard]] auto parse_decontext_output(std::string_view raw) -> ParsedOutput;

/// Sentences listed in `exempt` come back unnecessary without a backend
/// call. A feasible answer with empty text is treated as infeasible.
[[nodiscard]] auto decontextualise(corpus::SentenceRecord const& sentence, contextgen::ContextSet const& context,
                                   backends::BackendRegistry const& registry,
                                   std::set<std::size_t> const& exempt = {}) -> DecontextResult;

/// "X is A." / "X refers to A." back into (X, A). The sentence is used to
/// pick the split point whose X actually occurs in it.
[[nodiscard]] auto parse_declarative(std::string_view declarative, std::string_view sentence)
    -> std::optional<std::pair<std::string, std::string>>;

/// The reference decontextualiser over the wire format. Each (X, A) from the
/// context replaces the first free occurrence of X in the sentence (longest
/// X first) when A strictly extends X or X is a pronoun.
///   feasible    at least one replacement
///   unnecessary no replacement and no pronoun in the sentence
///   infeasible  otherwise
[[nodiscard]] auto reference_rewrite(std::string_view input) -> std::string;

}  // namespace claimforge::decontext
