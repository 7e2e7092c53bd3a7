#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "claimforge/corpus.hpp"

namespace claimforge::backends {
class BackendRegistry;
}
namespace claimforge::ir {
class Bm25Index;
}

namespace claimforge::contextgen {

enum class UnitKind : std::uint8_t { named_entity, pronoun, noun, noun_phrase, verb, verb_phrase };

[[nodiscard]] auto to_string(UnitKind kind) -> std::string_view;
[[nodiscard]] auto parse_unit_kind(std::string_view name) -> UnitKind;

/// A potentially ambiguous span of a sentence. `begin`/`end` are byte
/// offsets and `text == sentence.substr(begin, end - begin)`.
struct InformationUnit {
    std::string text;
    UnitKind kind = UnitKind::named_entity;
    std::size_t begin = 0;
    std::size_t end = 0;

    friend auto operator==(InformationUnit const&, InformationUnit const&) -> bool = default;
};

class Analyzer {
  public:
    Analyzer() = default;
    Analyzer(Analyzer const&) = default;
    auto operator=(Analyzer const&) -> Analyzer& = default;
    Analyzer(Analyzer&&) = default;
    auto operator=(Analyzer&&) -> Analyzer& = default;
    virtual ~Analyzer() = default;

    [[nodiscard]] virtual auto analyze(std::string_view sentence) const -> std::vector<InformationUnit> = 0;
};

/// Rule-based unit extraction. Candidates, in priority order:
///   named_entity  maximal run of capitalized non-function words
///   pronoun       closed pronoun list
///   noun_phrase   the/this/that/these/those + 1-3 lowercase content words
///   verb_phrase   auxiliary + verb-like word
///   verb          verb-like word
///   noun          lowercase word with a nominal suffix (-tion, -ment, ...)
/// Overlapping candidates are resolved in that order; at most `unit_cap`
/// units are kept, longest first, and returned left to right.
class ReferenceAnalyzer final : public Analyzer {
  public:
    explicit ReferenceAnalyzer(std::size_t unit_cap = 12) : m_unit_cap(unit_cap) {}

    [[nodiscard]] auto analyze(std::string_view sentence) const -> std::vector<InformationUnit> override;

  private:
    std::size_t m_unit_cap;
};

/// Throws InvalidArgument for an empty sentence.
[[nodiscard]] auto extract_information_units(std::string_view sentence, Analyzer const& analyzer)
    -> std::vector<InformationUnit>;

struct GeneratedQuestion {
    std::string question;
    InformationUnit target;
};

[[nodiscard]] auto generate_question(std::string const& sentence, InformationUnit const& unit,
                                     backends::BackendRegistry const& registry) -> GeneratedQuestion;

struct QAPair {
    GeneratedQuestion question;
    std::string answer;
    std::vector<std::size_t> evidence_ids;
};

/// BM25-retrieves the top `evidence_k` sentences for the question, leaving
/// out `exclude` (the sentence the question was generated from), and asks
/// the QA backend. Returns nullopt when the backend abstains.
/// Ids of the top `evidence_k` sentences for the question by BM25, skipping
/// `exclude`.
[[nodiscard]] auto retrieve_evidence(ir::Bm25Index const& index, std::string const& question, std::size_t evidence_k,
                                     std::optional<std::size_t> exclude = std::nullopt) -> std::vector<std::size_t>;

/// Asks the QA backend over the given evidence sentences.
[[nodiscard]] auto answer_from_evidence(corpus::Document const& document, GeneratedQuestion const& question,
                                        std::vector<std::size_t> const& evidence_ids,
                                        backends::BackendRegistry const& registry) -> std::optional<QAPair>;

[[nodiscard]] auto answer_question(corpus::Document const& document, ir::Bm25Index const& index,
                                   GeneratedQuestion const& question, backends::BackendRegistry const& registry,
                                   std::size_t evidence_k, std::optional<std::size_t> exclude = std::nullopt)
    -> std::optional<QAPair>;

[[nodiscard]] auto qa_to_declarative(QAPair const& pair, backends::BackendRegistry const& registry)
    -> std::string;

/// What happened to one unit while building a context.
struct UnitTrace {
    InformationUnit unit;
    std::string question;
    std::vector<std::size_t> evidence_ids;
    std::optional<std::string> answer;
    std::optional<std::string> declarative;
};

struct ContextSet {
    std::size_t sentence_index = 0;
    /// Unit order, exact duplicates removed.
    std::vector<std::string> declaratives;
    std::vector<UnitTrace> trace;
};

struct ContextOptions {
    std::size_t evidence_k = 3;
    std::size_t unit_cap = 12;
};

/// units -> questions -> answers -> declaratives for one sentence. Backend
/// failures surface as StageError naming the step.
[[nodiscard]] auto build_context(std::size_t sentence_index, corpus::Document const& document,
                                 ir::Bm25Index const& index, backends::BackendRegistry const& registry,
                                 ContextOptions const& options = {}) -> ContextSet;

// Reference question generation / answering / conversion. The question
// templates are
//   pronoun, named_entity : "Who or what is {unit} in: {sentence}?"
//   noun, noun_phrase     : "Which {unit} is meant in: {sentence}?"
//   verb, verb_phrase     : "What does {unit} refer to in: {sentence}?"

[[nodiscard]] auto question_template(UnitKind kind, std::string_view unit, std::string_view sentence)
    -> std::string;

/// When `kind` is absent the unit's kind is looked up with the reference
/// analyzer; unknown units use the who-or-what template.
[[nodiscard]] auto reference_question(std::string const& sentence, std::string const& answer,
                                      std::optional<UnitKind> kind) -> std::string;

/// Parsed form of a templated question.
struct ParsedQuestion {
    enum class Form : std::uint8_t { who_what, which, refer } form = Form::who_what;
    std::string unit;
    std::string sentence;
};

[[nodiscard]] auto parse_question(std::string_view question) -> std::optional<ParsedQuestion>;

/// Reference QA. Abstains on verb questions and on untemplated input.
///   he/him/his/she/her/hers : first name run of two or more words in the
///                             evidence, in evidence order
///   other pronouns          : abstain
///   nominal units           : the longest window around a mention of the
///                             unit in any evidence sentence (other than the
///                             question's own sentence), grown leftwards over
///                             modifier words and rightwards over
///                             preposition + capitalized run; abstains when
///                             no window is longer than the unit itself
[[nodiscard]] auto reference_answer(std::string const& question, std::vector<std::string> const& evidence)
    -> std::optional<std::string>;

/// "Who or what is X" + A -> "X is A."; "Which X" + A -> "The X is A." (X
/// capitalized instead when it already starts with a determiner);
/// "What does X refer to" + A -> "X refers to A."; otherwise "A.".
[[nodiscard]] auto reference_declarative(std::string const& question, std::string const& answer) -> std::string;

}  // namespace claimforge::contextgen
