#include "claimforge/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "claimforge/error.hpp"
#include "claimforge/text.hpp"
#include "http.hpp"
#include "parallel.hpp"

namespace claimforge::corpus {

namespace {

constexpr std::array<std::string_view, 26> kAbbreviations{
    "mr", "mrs", "ms",  "dr",  "prof", "sr",  "jr",  "st",  "vs",  "e.g", "i.e", "gen", "gov",
    "sen", "rep", "rev", "lt", "col",  "sgt", "capt", "mt", "ft", "approx", "no", "fig", "ca"};

auto is_terminator(char c) -> bool { return c == '.' || c == '!' || c == '?'; }

auto utf8_at(std::string_view s, std::size_t i, unsigned char third) -> bool
{
    return i + 3 <= s.size() && static_cast<unsigned char>(s[i]) == 0xE2
        && static_cast<unsigned char>(s[i + 1]) == 0x80 && static_cast<unsigned char>(s[i + 2]) == third;
}

constexpr unsigned char kLeftDoubleQuote = 0x9C;
constexpr unsigned char kRightDoubleQuote = 0x9D;
constexpr unsigned char kRightSingleQuote = 0x99;

// The word immediately before the period at `dot`, without leading punctuation.
auto word_before(std::string_view raw, std::size_t begin, std::size_t dot) -> std::string_view
{
    std::size_t w = dot;
    while (w > begin && !text::is_space(raw[w - 1])) {
        --w;
    }
    auto word = raw.substr(w, dot - w);
    while (!word.empty() && std::ispunct(static_cast<unsigned char>(word.front())) != 0) {
        word.remove_prefix(1);
    }
    return word;
}

auto is_guarded_abbreviation(std::string_view word) -> bool
{
    if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word.front())) != 0) {
        return true;
    }
    auto lower = text::to_lower(word);
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

auto sample_to_json(ExtractionSample const& sample) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["id"] = sample.document.id;
    j["source_url"] = sample.document.source_url;
    j["sentences"] = sample.document.texts();
    j["gold_claim"] = sample.gold_claim;
    j["split"] = to_string(sample.split);
    return j;
}

template <typename T>
auto required(nlohmann::json const& j, char const* key, std::size_t line) -> T
{
    if (!j.contains(key)) {
        throw FormatError("line " + std::to_string(line) + ": missing key '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (nlohmann::json::exception const& e) {
        throw FormatError("line " + std::to_string(line) + ": bad value for '" + key + "': " + e.what());
    }
}

auto parse_line(std::string const& line, std::size_t line_no) -> nlohmann::json
{
    try {
        return nlohmann::json::parse(line);
    } catch (nlohmann::json::parse_error const& e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

auto word_count(std::string_view s) -> double { return static_cast<double>(text::split_whitespace(s).size()); }

auto ends_with_any(std::string const& s, std::initializer_list<std::string_view> suffixes) -> bool
{
    return std::any_of(suffixes.begin(), suffixes.end(), [&](auto suf) { return s.ends_with(suf); });
}

}  // namespace

auto Document::sentence(std::size_t i) const -> std::string const&
{
    if (i >= sentences.size()) {
        throw InvalidArgument("document " + id + ": no sentence " + std::to_string(i));
    }
    return sentences[i].text;
}

auto Document::texts() const -> std::vector<std::string>
{
    std::vector<std::string> out;
    out.reserve(sentences.size());
    for (auto const& s: sentences) {
        out.push_back(s.text);
    }
    return out;
}

auto Document::from_sentences(std::string id, std::string source_url, std::vector<std::string> const& sentences)
    -> Document
{
    Document doc;
    doc.id = std::move(id);
    doc.source_url = std::move(source_url);
    for (auto const& s: sentences) {
        auto text = text::collapse_whitespace(s);
        if (text.empty()) {
            throw InvalidArgument("document " + doc.id + ": empty sentence");
        }
        doc.sentences.push_back({doc.sentences.size(), std::move(text)});
    }
    doc.raw_text = text::join(doc.texts(), " ");
    return doc;
}

auto Document::from_text(std::string id, std::string source_url, std::string raw_text) -> Document
{
    Document doc;
    doc.id = std::move(id);
    doc.source_url = std::move(source_url);
    doc.sentences = segment_document(raw_text);
    doc.raw_text = std::move(raw_text);
    return doc;
}

auto to_string(FetchStatus s) -> std::string_view
{
    switch (s) {
    case FetchStatus::ok: return "ok";
    case FetchStatus::unreachable: return "unreachable";
    case FetchStatus::empty: return "empty";
    }
    return "unreachable";
}

auto to_string(Split s) -> std::string_view
{
    switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    case Split::all: return "all";
    }
    return "all";
}

auto to_string(MediaFlag m) -> std::string_view
{
    switch (m) {
    case MediaFlag::image: return "image";
    case MediaFlag::video: return "video";
    case MediaFlag::audio: return "audio";
    }
    return "image";
}

auto parse_fetch_status(std::string_view s) -> FetchStatus
{
    if (s == "ok") {
        return FetchStatus::ok;
    }
    if (s == "unreachable") {
        return FetchStatus::unreachable;
    }
    if (s == "empty") {
        return FetchStatus::empty;
    }
    throw FormatError("unknown fetch status '" + std::string(s) + "'");
}

auto parse_split(std::string_view s) -> Split
{
    if (s == "train") {
        return Split::train;
    }
    if (s == "dev") {
        return Split::dev;
    }
    if (s == "test") {
        return Split::test;
    }
    if (s == "all") {
        return Split::all;
    }
    throw FormatError("unknown split '" + std::string(s) + "'");
}

auto parse_media_flag(std::string_view s) -> MediaFlag
{
    if (s == "image") {
        return MediaFlag::image;
    }
    if (s == "video") {
        return MediaFlag::video;
    }
    if (s == "audio") {
        return MediaFlag::audio;
    }
    throw FormatError("unknown media flag '" + std::string(s) + "'");
}

auto segment_document(std::string_view raw) -> std::vector<SentenceRecord>
{
    std::vector<SentenceRecord> out;
    std::size_t const n = raw.size();
    std::size_t start = 0;
    int depth = 0;
    bool in_quote = false;

    auto emit = [&](std::size_t end) {
        auto sentence = text::collapse_whitespace(raw.substr(start, end - start));
        if (!sentence.empty()) {
            out.push_back({out.size(), std::move(sentence)});
        }
        start = end;
    };

    std::size_t i = 0;
    while (i < n) {
        char c = raw[i];
        if (c == '\n') {
            std::size_t j = i + 1;
            while (j < n && (raw[j] == ' ' || raw[j] == '\t' || raw[j] == '\r')) {
                ++j;
            }
            if (j < n && raw[j] == '\n') {
                emit(i);
                depth = 0;
                in_quote = false;
                i = j + 1;
                continue;
            }
            ++i;
            continue;
        }
        if (c == '(' || c == '[') {
            ++depth;
            ++i;
            continue;
        }
        if (c == ')' || c == ']') {
            depth = std::max(0, depth - 1);
            ++i;
            continue;
        }
        if (c == '"') {
            in_quote = !in_quote;
            ++i;
            continue;
        }
        if (utf8_at(raw, i, kLeftDoubleQuote)) {
            in_quote = true;
            i += 3;
            continue;
        }
        if (utf8_at(raw, i, kRightDoubleQuote)) {
            in_quote = false;
            i += 3;
            continue;
        }
        if (!is_terminator(c)) {
            ++i;
            continue;
        }

        std::size_t j = i;
        while (j < n && is_terminator(raw[j])) {
            ++j;
        }
        bool single_period = (j - i == 1) && c == '.';
        // Closing quotes and brackets belong to the sentence they end.
        for (;;) {
            if (j < n && (raw[j] == ')' || raw[j] == ']')) {
                depth = std::max(0, depth - 1);
                ++j;
            } else if (j < n && raw[j] == '"' && in_quote) {
                in_quote = false;
                ++j;
            } else if (j < n && raw[j] == '\'') {
                ++j;
            } else if (utf8_at(raw, j, kRightDoubleQuote)) {
                in_quote = false;
                j += 3;
            } else if (utf8_at(raw, j, kRightSingleQuote)) {
                j += 3;
            } else {
                break;
            }
        }
        if (depth == 0 && !in_quote && (j == n || text::is_space(raw[j]))) {
            bool split = true;
            if (single_period && is_guarded_abbreviation(word_before(raw, start, i))) {
                split = false;
            }
            std::size_t k = j;
            while (k < n && text::is_space(raw[k])) {
                ++k;
            }
            if (k < n && std::islower(static_cast<unsigned char>(raw[k])) != 0) {
                split = false;
            }
            if (split) {
                emit(j);
            }
        }
        i = j;
    }
    emit(n);
    return out;
}

auto filter_averitec(std::vector<AveritecRecord> const& records) -> std::vector<ExtractionSample>
{
    std::vector<ExtractionSample> out;
    for (auto const& record: records) {
        if (!record.media_flags.empty()) {
            continue;
        }
        if (record.fetch_status != FetchStatus::ok || text::trim(record.scraped_text).empty()) {
            continue;
        }
        ExtractionSample sample;
        sample.document = Document::from_text(record.id, record.source_url, record.scraped_text);
        if (sample.document.sentences.empty()) {
            continue;
        }
        sample.gold_claim = record.claim;
        sample.split = record.split;
        out.push_back(std::move(sample));
    }
    return out;
}

auto median(std::vector<double> values) -> double
{
    if (values.empty()) {
        throw NoDataError("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    auto mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return (values[mid - 1] + values[mid]) / 2.0;
}

auto corpus_stats(std::vector<ExtractionSample> const& samples) -> StatsTable
{
    if (samples.empty()) {
        throw NoDataError("corpus statistics need at least one sample");
    }
    std::vector<double> sentence_counts;
    std::vector<double> claim_words;
    std::vector<double> document_words;
    double claim_sentences = 0.0;
    for (auto const& sample: samples) {
        sentence_counts.push_back(static_cast<double>(sample.document.size()));
        claim_words.push_back(word_count(sample.gold_claim));
        double words = 0.0;
        for (auto const& s: sample.document.sentences) {
            words += word_count(s.text);
        }
        document_words.push_back(words);
        claim_sentences += static_cast<double>(segment_document(sample.gold_claim).size());
    }
    StatsTable table;
    table.samples = samples.size();
    table.median_sentences = median(sentence_counts);
    table.avg_claim_sentences = claim_sentences / static_cast<double>(samples.size());
    table.median_claim_words = median(claim_words);
    table.median_document_words = median(document_words);
    return table;
}

auto fetch_source(std::string const& url, ScraperConfig const& config) -> FetchResult
{
    auto parsed = detail::parse_url(url);
    if (!parsed) {
        throw InvalidArgument("malformed URL: '" + url + "'");
    }
    std::string body;
    bool html = true;
    if (parsed->scheme == "file") {
        std::ifstream in(parsed->path, std::ios::binary);
        if (!in) {
            return {FetchStatus::unreachable, ""};
        }
        body.resize(config.max_bytes);
        in.read(body.data(), static_cast<std::streamsize>(config.max_bytes));
        body.resize(static_cast<std::size_t>(in.gcount()));
        html = ends_with_any(text::to_lower(parsed->path), {".html", ".htm"});
    } else {
        if (!config.live) {
            return {FetchStatus::unreachable, ""};
        }
        auto res = detail::http_get(*parsed, config.user_agent, config.timeout_seconds, config.max_bytes);
        if (res.error != detail::HttpErrorKind::none || res.status < 200 || res.status >= 300) {
            return {FetchStatus::unreachable, ""};
        }
        body = std::move(res.body);
    }
    auto extracted = html ? extract_html_text(body) : text::collapse_whitespace(body);
    if (text::strip_punctuation(text::trim(extracted)).empty()) {
        return {FetchStatus::empty, ""};
    }
    return {FetchStatus::ok, std::move(extracted)};
}

auto infer_media_flags(std::string const& url) -> std::set<MediaFlag>
{
    auto lower = text::to_lower(url);
    if (auto q = lower.find_first_of("?#"); q != std::string::npos) {
        lower.resize(q);
    }
    std::set<MediaFlag> flags;
    if (ends_with_any(lower, {".jpg", ".jpeg", ".png", ".gif", ".webp", ".bmp", ".svg"})) {
        flags.insert(MediaFlag::image);
    }
    if (ends_with_any(lower, {".mp4", ".mov", ".webm", ".avi", ".mkv"})
        || lower.find("youtube.com/") != std::string::npos || lower.find("youtu.be/") != std::string::npos
        || lower.find("rumble.com/") != std::string::npos || lower.find("tiktok.com/") != std::string::npos) {
        flags.insert(MediaFlag::video);
    }
    if (ends_with_any(lower, {".mp3", ".wav", ".ogg", ".m4a", ".flac"})) {
        flags.insert(MediaFlag::audio);
    }
    return flags;
}

void resolve_sources(std::vector<AveritecRecord>& records, ScraperConfig const& config, std::size_t workers)
{
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].needs_fetch && records[i].media_flags.empty()) {
            pending.push_back(i);
        }
    }
    detail::parallel_for(pending.size(), workers, [&](std::size_t p) {
        auto& record = records[pending[p]];
        try {
            auto fetched = fetch_source(record.source_url, config);
            record.fetch_status = fetched.status;
            record.scraped_text = std::move(fetched.text);
        } catch (InvalidArgument const&) {
            record.fetch_status = FetchStatus::unreachable;
            record.scraped_text.clear();
        }
        record.needs_fetch = false;
    });
}

void write_corpus(std::ostream& out, std::vector<ExtractionSample> const& samples)
{
    for (auto const& sample: samples) {
        out << sample_to_json(sample).dump() << '\n';
    }
}

void save_corpus(std::filesystem::path const& path, std::vector<ExtractionSample> const& samples)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write corpus file " + path.string());
    }
    write_corpus(out, samples);
}

auto read_corpus(std::istream& in) -> std::vector<ExtractionSample>
{
    std::vector<ExtractionSample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        auto j = parse_line(line, line_no);
        auto sentences = required<std::vector<std::string>>(j, "sentences", line_no);
        if (sentences.empty()) {
            throw FormatError("line " + std::to_string(line_no) + ": document has no sentences");
        }
        ExtractionSample sample;
        try {
            sample.document = Document::from_sentences(required<std::string>(j, "id", line_no),
                                                       required<std::string>(j, "source_url", line_no),
                                                       sentences);
        } catch (InvalidArgument const& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
        sample.gold_claim = required<std::string>(j, "gold_claim", line_no);
        sample.split = parse_split(required<std::string>(j, "split", line_no));
        samples.push_back(std::move(sample));
    }
    return samples;
}

auto load_corpus(std::filesystem::path const& path) -> std::vector<ExtractionSample>
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read corpus file " + path.string());
    }
    return read_corpus(in);
}

auto load_records(std::filesystem::path const& path) -> std::vector<AveritecRecord>
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read record file " + path.string());
    }
    std::vector<AveritecRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        auto j = parse_line(line, line_no);
        AveritecRecord record;
        record.id = j.value("id", "record-" + std::to_string(records.size()));
        record.claim = required<std::string>(j, "claim", line_no);
        if (text::trim(record.claim).empty()) {
            throw FormatError("line " + std::to_string(line_no) + ": empty claim");
        }
        record.source_url = j.value("source_url", std::string{});
        if (j.contains("media")) {
            for (auto const& flag: required<std::vector<std::string>>(j, "media", line_no)) {
                record.media_flags.insert(parse_media_flag(flag));
            }
        } else {
            record.media_flags = infer_media_flags(record.source_url);
        }
        if (j.contains("split")) {
            record.split = parse_split(required<std::string>(j, "split", line_no));
        }
        if (j.contains("fetch_status")) {
            record.fetch_status = parse_fetch_status(required<std::string>(j, "fetch_status", line_no));
            record.scraped_text = j.value("text", std::string{});
        } else if (j.contains("text")) {
            record.scraped_text = required<std::string>(j, "text", line_no);
            record.fetch_status = text::trim(record.scraped_text).empty() ? FetchStatus::empty : FetchStatus::ok;
        } else {
            record.needs_fetch = true;
        }
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace claimforge::corpus
