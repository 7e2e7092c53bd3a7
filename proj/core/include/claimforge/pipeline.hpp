#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "claimforge/backends.hpp"
#include "claimforge/checkworthy.hpp"
#include "claimforge/config.hpp"
#include "claimforge/contextgen.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/decontext.hpp"
#include "claimforge/evaluation.hpp"
#include "claimforge/extraction.hpp"

namespace claimforge::pipeline {

using ordered_json = nlohmann::ordered_json;

struct CandidateResult {
    std::size_t index = 0;
    std::string sentence;
    contextgen::ContextSet context;
    /// The exact decontextualiser input, empty when the sentence was exempt.
    std::string decontext_input;
    decontext::DecontextResult decontext;
    checkworthy::CheckworthinessScore score;
};

struct PipelineResult {
    std::string document_id;
    std::string scorer;
    std::vector<extraction::SentenceScore> scores;
    std::vector<std::size_t> ranked;
    /// Deduplicated ranking of length <= eval_depth; `central` is its prefix.
    std::vector<std::size_t> evaluation_ranking;
    std::vector<std::size_t> central;
    std::vector<CandidateResult> candidates;
    checkworthy::ClaimSelection selection;

    /// Set when the document failed; the other fields are then incomplete.
    std::optional<std::string> failed_stage;
    std::string error;

    [[nodiscard]] auto ok() const -> bool { return !failed_stage.has_value(); }
    [[nodiscard]] auto selected_candidate() const -> CandidateResult const&;
};

/// Backends named by the config, else CLAIMFORGE_BACKEND_CONFIG, else the
/// reference implementations. Throws unless every role is covered.
[[nodiscard]] auto make_registry(PipelineConfig const& config) -> backends::BackendRegistry;

/// score -> rank -> dedup -> context -> decontextualise -> classify ->
/// select for one document. Throws StageError naming the failing stage.
[[nodiscard]] auto run_document(corpus::Document const& document, PipelineConfig const& config,
                                backends::BackendRegistry const& registry) -> PipelineResult;

/// What evaluation needs from one document's run.
struct ClaimOutcome {
    std::string document_id;
    std::vector<std::size_t> ranking;
    std::size_t source_index = 0;
    std::string claim_text;
    decontext::Category category = decontext::Category::unnecessary;
};

[[nodiscard]] auto outcome(PipelineResult const& result) -> ClaimOutcome;

struct Failure {
    std::string document_id;
    std::string stage;
    std::string message;
};

struct EvaluationSummary {
    std::vector<evaluation::MetricReport> reports;
    evaluation::CategoryCounts categories;
    std::size_t documents = 0;
    std::vector<Failure> failures;
};

/// Reports over successful documents matched to their samples by id:
///   extraction.P@k            gold = proxy_gold_sentence (k in 1, 3, 5, 10)
///   claim.chrf.original       chrF of the winning sentence as written
///   claim.chrf.decontextualised
///   claim.sari.original       SARI against the gold claim, source = sentence
///   claim.sari.decontextualised
/// Category counts are over the winning candidates.
[[nodiscard]] auto evaluate(std::vector<ClaimOutcome> const& outcomes,
                            std::vector<corpus::ExtractionSample> const& samples, PipelineConfig const& config)
    -> EvaluationSummary;

struct CorpusRun {
    std::vector<PipelineResult> results;
    EvaluationSummary summary;
};

/// Runs every document on up to config.workers threads; results keep input
/// order. Failed documents are recorded and skipped by evaluation. Throws
/// NoDataError for an empty corpus.
[[nodiscard]] auto run_corpus(std::vector<corpus::ExtractionSample> const& samples, PipelineConfig const& config,
                              backends::BackendRegistry const& registry) -> CorpusRun;

// Serialization. Key order is fixed so that outputs diff cleanly.

[[nodiscard]] auto to_json(PipelineResult const& result) -> ordered_json;
/// Trace record per candidate: units, questions, evidence ids, answers,
/// declaratives, decontext input and the text that was classified.
[[nodiscard]] auto trace_json(PipelineResult const& result) -> std::vector<ordered_json>;
[[nodiscard]] auto to_json(EvaluationSummary const& summary) -> ordered_json;

void write_results(std::ostream& out, std::vector<PipelineResult> const& results);
void write_trace(std::ostream& out, std::vector<PipelineResult> const& results);

/// Reads a results file back into evaluation inputs. Failure lines come back
/// in `failures`.
struct ResultsFile {
    std::vector<ClaimOutcome> outcomes;
    std::vector<Failure> failures;
};

[[nodiscard]] auto read_results(std::istream& in) -> ResultsFile;
[[nodiscard]] auto load_results(std::filesystem::path const& path) -> ResultsFile;

}  // namespace claimforge::pipeline
