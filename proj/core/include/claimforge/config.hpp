#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "claimforge/contextgen.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/evaluation.hpp"
#include "claimforge/extraction.hpp"

namespace claimforge {

struct PipelineConfig {
    extraction::ScorerOptions scoring;
    double threshold = 0.5;
    /// Length of the deduplicated ranking kept for P@k evaluation; the k
    /// central sentences are its prefix.
    std::size_t eval_depth = 10;
    contextgen::ContextOptions context;
    evaluation::ChrfParams chrf;
    bool exempt_lead = true;
    bool trace = false;
    std::size_t workers = 1;
    /// Backend descriptor file; empty means CLAIMFORGE_BACKEND_CONFIG or the
    /// reference backends.
    std::string backends_config;
    corpus::ScraperConfig scraper;

    [[nodiscard]] auto k() const -> std::size_t { return scoring.k; }

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Sets one field from its config key, e.g. "extraction.k" = "3". Throws
/// FormatError for unknown keys or unparsable values.
void apply_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" lines; '#' starts a comment. Keys:
///   extraction.scorer  extraction.k  extraction.threshold  extraction.eval_depth
///   textrank.damping  textrank.tol  textrank.max_iter  lsa.topics
///   contextgen.evidence_k  contextgen.unit_cap  chrf.max_n  chrf.beta
///   decontext.exempt_lead  trace  workers  backends.config
///   scraper.user_agent  scraper.timeout_seconds  scraper.max_bytes  scraper.live
[[nodiscard]] auto read_config(std::istream& in, PipelineConfig base = {}) -> PipelineConfig;
[[nodiscard]] auto load_config(std::filesystem::path const& path, PipelineConfig base = {}) -> PipelineConfig;

/// The config in the same format, one key per line in the order above.
[[nodiscard]] auto format_config(PipelineConfig const& config) -> std::string;

}  // namespace claimforge
