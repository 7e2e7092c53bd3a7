#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace claimforge::corpus {

struct SentenceRecord {
    std::size_t index = 0;
    std::string text;

    friend auto operator==(SentenceRecord const&, SentenceRecord const&) -> bool = default;
};

/// A source article as ordered, 0-indexed sentences.
///
/// `raw_text` is the text the sentences were segmented from. It is kept
/// from ingest only: the corpus file stores sentences, so a loaded
/// document's raw text is its sentences joined by single spaces.
struct Document {
    std::string id;
    std::string source_url;
    std::vector<SentenceRecord> sentences;
    std::string raw_text;

    [[nodiscard]] auto size() const -> std::size_t { return sentences.size(); }
    [[nodiscard]] auto sentence(std::size_t i) const -> std::string const&;
    [[nodiscard]] auto texts() const -> std::vector<std::string>;

    /// Builds a document from already-segmented sentences.
    [[nodiscard]] static auto from_sentences(std::string id, std::string source_url,
                                             std::vector<std::string> const& sentences) -> Document;
    /// Segments `raw_text` with segment_document().
    [[nodiscard]] static auto from_text(std::string id, std::string source_url, std::string raw_text)
        -> Document;

    friend auto operator==(Document const& lhs, Document const& rhs) -> bool
    {
        return lhs.id == rhs.id && lhs.source_url == rhs.source_url && lhs.sentences == rhs.sentences;
    }
};

enum class MediaFlag : std::uint8_t { image, video, audio };
enum class FetchStatus : std::uint8_t { ok, unreachable, empty };
enum class Split : std::uint8_t { train, dev, test, all };

[[nodiscard]] auto to_string(FetchStatus s) -> std::string_view;
[[nodiscard]] auto to_string(Split s) -> std::string_view;
[[nodiscard]] auto to_string(MediaFlag m) -> std::string_view;
[[nodiscard]] auto parse_fetch_status(std::string_view s) -> FetchStatus;
[[nodiscard]] auto parse_split(std::string_view s) -> Split;
[[nodiscard]] auto parse_media_flag(std::string_view s) -> MediaFlag;

struct AveritecRecord {
    std::string id;
    std::string claim;
    std::string source_url;
    std::set<MediaFlag> media_flags;
    FetchStatus fetch_status = FetchStatus::unreachable;
    std::string scraped_text;
    Split split = Split::all;
    /// Set by load_records() when the file carried no fetch result.
    bool needs_fetch = false;
};

struct ExtractionSample {
    Document document;
    std::string gold_claim;
    Split split = Split::all;

    friend auto operator==(ExtractionSample const&, ExtractionSample const&) -> bool = default;
};

/// Rule-based sentence splitter.
///
/// Splits after a run of '.', '!' or '?' (plus any closing quotes/brackets)
/// that is followed by whitespace or the end of text, except:
///   - inside parentheses, brackets or quotation marks;
///   - after a single-letter initial ("A.") or a listed abbreviation ("Dr.");
///   - when the next word starts with a lowercase letter.
/// A blank line always ends a sentence. Sentence text has its whitespace
/// collapsed, so joining the sentences with single spaces reproduces the
/// collapsed input.
[[nodiscard]] auto segment_document(std::string_view raw_text) -> std::vector<SentenceRecord>;

/// Drops records with any media flag, then records whose fetch failed or
/// returned no usable text. One sample per surviving record.
[[nodiscard]] auto filter_averitec(std::vector<AveritecRecord> const& records)
    -> std::vector<ExtractionSample>;

struct StatsTable {
    std::size_t samples = 0;
    double median_sentences = 0.0;
    double avg_claim_sentences = 0.0;
    double median_claim_words = 0.0;
    double median_document_words = 0.0;
};

[[nodiscard]] auto corpus_stats(std::vector<ExtractionSample> const& samples) -> StatsTable;

[[nodiscard]] auto median(std::vector<double> values) -> double;

struct ScraperConfig {
    std::string user_agent = "claimforge/0.1";
    double timeout_seconds = 10.0;
    std::size_t max_bytes = 4U << 20U;
    /// Remote http(s) fetching is disabled unless set; file:// always works.
    bool live = false;
};

struct FetchResult {
    FetchStatus status = FetchStatus::unreachable;
    std::string text;
};

/// Fetches a URL and returns its visible text. Network failures are reported
/// through the status, never thrown; a malformed URL throws InvalidArgument
/// before any I/O.
[[nodiscard]] auto fetch_source(std::string const& url, ScraperConfig const& config = {}) -> FetchResult;

/// Visible paragraph text of an HTML page, paragraphs separated by blank lines.
[[nodiscard]] auto extract_html_text(std::string_view html) -> std::string;

// JSONL corpus file: {"id","source_url","sentences":[...],"gold_claim","split"} per line.
void write_corpus(std::ostream& out, std::vector<ExtractionSample> const& samples);
void save_corpus(std::filesystem::path const& path, std::vector<ExtractionSample> const& samples);
[[nodiscard]] auto read_corpus(std::istream& in) -> std::vector<ExtractionSample>;
[[nodiscard]] auto load_corpus(std::filesystem::path const& path) -> std::vector<ExtractionSample>;

/// Media flags implied by the URL itself (image/video/audio file extensions
/// and video-hosting domains).
[[nodiscard]] auto infer_media_flags(std::string const& url) -> std::set<MediaFlag>;

/// Fetches every record marked `needs_fetch` that carries no media flag,
/// using up to `workers` concurrent fetches. Malformed URLs resolve to
/// `unreachable`.
void resolve_sources(std::vector<AveritecRecord>& records, ScraperConfig const& config,
                     std::size_t workers = 1);

/// AVeriTeC-style record file (JSONL). Keys: id, claim, source_url, media
/// (array of "image"/"video"/"audio"), and optionally fetch_status, text, split.
[[nodiscard]] auto load_records(std::filesystem::path const& path) -> std::vector<AveritecRecord>;

}  // namespace claimforge::corpus
