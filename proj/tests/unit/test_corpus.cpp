#include <catch2/catch.hpp>

#include <sstream>

#include <nlohmann/json.hpp>

#include "claimforge/corpus.hpp"
#include "claimforge/error.hpp"
#include "claimforge/text.hpp"
#include "fixtures.hpp"

using namespace claimforge;
using namespace claimforge::corpus;

namespace {

auto texts(std::vector<SentenceRecord> const& records) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (auto const& r: records) {
        out.push_back(r.text);
    }
    return out;
}

auto record(std::string id, FetchStatus status, std::string text, std::set<MediaFlag> media = {}) -> AveritecRecord
{
    AveritecRecord r;
    r.id = std::move(id);
    r.claim = "A claim.";
    r.source_url = "https://example.org/" + r.id;
    r.fetch_status = status;
    r.scraped_text = std::move(text);
    r.media_flags = std::move(media);
    r.split = Split::dev;
    return r;
}

auto sample_with(std::size_t sentences) -> ExtractionSample
{
    std::vector<std::string> s;
    for (std::size_t i = 0; i < sentences; ++i) {
        s.push_back("Sentence number " + std::to_string(i) + ".");
    }
    return {Document::from_sentences("d" + std::to_string(sentences), "", s), "Gold claim here.", Split::dev};
}

}  // namespace

TEST_CASE("segmenter matches hand-segmented fixtures", "[corpus]")
{
    std::ifstream in(test::data_dir() / "segmentation.jsonl");
    std::string line;
    int cases = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        auto text = j["text"].get<std::string>();
        auto expected = j["sentences"].get<std::vector<std::string>>();
        INFO(text);
        auto got = segment_document(text);
        CHECK(texts(got) == expected);
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].index == i);
        }
        CHECK(segment_document(text) == got);
        ++cases;
    }
    CHECK(cases == 9);
}

TEST_CASE("segmented sentences rejoin to the collapsed input", "[corpus]")
{
    std::string raw = "Bird is scrapping e-scooters.  The firm (based in Calif.) said so!\nIt is cheap? Yes.";
    auto got = segment_document(raw);
    std::string joined;
    for (auto const& s: got) {
        joined += (joined.empty() ? "" : " ") + s.text;
    }
    CHECK(joined == text::collapse_whitespace(raw));
}

TEST_CASE("filter drops media and failed fetches", "[corpus]")
{
    std::vector<AveritecRecord> records{
        record("video", FetchStatus::ok, "Some text here.", {MediaFlag::video}),
        record("down", FetchStatus::unreachable, ""),
        record("blank", FetchStatus::empty, ""),
        record("spaces", FetchStatus::ok, "   \n "),
        record("good", FetchStatus::ok, "First point. Second point."),
    };
    auto out = filter_averitec(records);
    REQUIRE(out.size() == 1);
    CHECK(out[0].document.id == "good");
    CHECK(out[0].document.size() == 2);
    CHECK(out[0].gold_claim == "A claim.");
    CHECK(out[0].split == Split::dev);
    CHECK(out.size() <= records.size());
}

TEST_CASE("corpus stats", "[corpus]")
{
    std::vector<ExtractionSample> four{sample_with(3), sample_with(5), sample_with(7), sample_with(9)};
    auto stats = corpus_stats(four);
    CHECK(stats.samples == 4);
    CHECK(stats.median_sentences == 6.0);
    CHECK(stats.median_claim_words == 3.0);
    CHECK(stats.avg_claim_sentences == 1.0);
    CHECK(corpus_stats({sample_with(4)}).median_sentences == 4.0);
    CHECK_THROWS_AS(corpus_stats({}), NoDataError);
    CHECK(median({5, 1, 3}) == 3.0);
}

TEST_CASE("fetch_source reads local fixtures", "[corpus]")
{
    auto url = "file://" + (test::data_dir() / "html" / "article.html").string();
    auto result = fetch_source(url);
    CHECK(result.status == FetchStatus::ok);
    auto expected = test::read_file(test::data_dir() / "html" / "article.txt");
    while (!expected.empty() && expected.back() == '\n') {
        expected.pop_back();
    }
    CHECK(result.text == expected);

    auto images = fetch_source("file://" + (test::data_dir() / "html" / "images_only.html").string());
    CHECK(images.status == FetchStatus::empty);
    CHECK(images.text.empty());

    auto missing = fetch_source("file://" + (test::data_dir() / "html" / "nope.html").string());
    CHECK(missing.status == FetchStatus::unreachable);
    CHECK(missing.text.empty());

    auto offline = fetch_source("http://unreachable.invalid/page");
    CHECK(offline.status == FetchStatus::unreachable);

    CHECK_THROWS_AS(fetch_source("not a url"), InvalidArgument);
    CHECK_THROWS_AS(fetch_source("ftp://example.org/x"), InvalidArgument);
}

TEST_CASE("media flags from urls", "[corpus]")
{
    CHECK(infer_media_flags("https://x.org/a.jpg") == std::set<MediaFlag>{MediaFlag::image});
    CHECK(infer_media_flags("https://www.youtube.com/watch?v=1") == std::set<MediaFlag>{MediaFlag::video});
    CHECK(infer_media_flags("https://x.org/story.html").empty());
}

TEST_CASE("corpus JSONL round trip", "[corpus]")
{
    std::vector<ExtractionSample> samples{
        {Document::from_sentences("a", "https://a.org", {"One \"quoted\" line.", "Ünïcode ß text."}), "Claim a.",
         Split::train},
        {Document::from_sentences("b", "", {"Only."}), "Claim b.", Split::test},
    };
    std::stringstream buffer;
    write_corpus(buffer, samples);
    auto loaded = read_corpus(buffer);
    CHECK(loaded == samples);

    std::stringstream bad("{\"id\": 3}\n");
    CHECK_THROWS_AS(read_corpus(bad), FormatError);
}

TEST_CASE("records file loads and marks unfetched records", "[corpus]")
{
    auto path = std::filesystem::temp_directory_path() / "claimforge_records.jsonl";
    {
        std::ofstream out(path);
        out << R"({"id":"r1","claim":"C1","source_url":"file:///tmp/x.html","media":[]})" << "\n";
        out << R"({"id":"r2","claim":"C2","source_url":"https://x.org","media":["image"],"fetch_status":"ok","text":"T.","split":"dev"})"
            << "\n";
    }
    auto records = load_records(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].needs_fetch);
    CHECK_FALSE(records[1].needs_fetch);
    CHECK(records[1].media_flags == std::set<MediaFlag>{MediaFlag::image});
    CHECK(records[1].split == Split::dev);
    std::filesystem::remove(path);
}
