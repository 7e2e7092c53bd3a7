#include <catch2/catch.hpp>

#include <algorithm>
#include <sstream>

#include "claimforge/backends.hpp"
#include "claimforge/config.hpp"
#include "claimforge/error.hpp"
#include "claimforge/pipeline.hpp"
#include "fixtures.hpp"

using namespace claimforge;
using namespace claimforge::pipeline;
using backends::Role;
using decontext::Category;

namespace {

auto fixture() -> std::vector<corpus::ExtractionSample>
{
    return corpus::load_corpus(test::data_dir() / "fixture_corpus.jsonl");
}

auto sample(std::string id, std::vector<std::string> sentences, std::string gold) -> corpus::ExtractionSample
{
    return {test::doc(sentences, std::move(id)), std::move(gold), corpus::Split::dev};
}

auto serialized(CorpusRun const& run) -> std::string
{
    std::ostringstream out;
    write_results(out, run.results);
    out << to_json(run.summary).dump(2);
    return out.str();
}

auto report(EvaluationSummary const& s, std::string const& name) -> evaluation::MetricReport
{
    auto it = std::find_if(s.reports.begin(), s.reports.end(), [&](auto const& r) { return r.name == name; });
    REQUIRE(it != s.reports.end());
    return *it;
}

}  // namespace

TEST_CASE("single sentence document", "[pipeline]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    auto result = run_document(test::doc({"He won the vote."}), config, registry);
    REQUIRE(result.ok());
    CHECK(result.central == std::vector<std::size_t>{0});
    CHECK(result.selection.claim_text == "He won the vote.");
    CHECK(result.selected_candidate().decontext.category == Category::unnecessary);
}

TEST_CASE("Bird document resolves the company", "[pipeline]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    auto samples = fixture();
    auto result = run_document(samples.at(0).document, config, registry);
    REQUIRE(result.ok());
    CHECK(result.selection.source_sentence_index == 3);
    CHECK(result.selection.claim_text.find("California scooter sharing start-up Bird") != std::string::npos);
    CHECK(result.selected_candidate().decontext.category == Category::feasible);
    // sentences 3 and 6 are near duplicates; only one survives
    CHECK_FALSE((std::count(result.central.begin(), result.central.end(), 3) &&
                 std::count(result.central.begin(), result.central.end(), 6)));
    CHECK(std::equal(result.central.begin(), result.central.end(), result.evaluation_ranking.begin()));
}

TEST_CASE("stage results are recorded and consistent", "[pipeline]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    for (auto const& s: fixture()) {
        auto r = run_document(s.document, config, registry);
        REQUIRE(r.ok());
        CHECK(r.scores.size() == s.document.size());
        CHECK(r.ranked.size() == s.document.size());
        CHECK(r.central.size() <= config.k());
        CHECK(r.candidates.size() == r.central.size());
        CHECK(std::count(r.central.begin(), r.central.end(), r.selection.source_sentence_index) == 1);
        for (auto const& c: r.candidates) {
            if (c.decontext.category != Category::feasible) {
                CHECK(c.decontext.text == c.sentence);
            }
            if (c.index == 0) {
                CHECK(c.decontext_input.empty());
                CHECK(c.decontext.category == Category::unnecessary);
            }
            // the classifier saw the decontextualised text
            CHECK(c.score == checkworthy::reference_classify(c.decontext.text));
        }
    }
}

TEST_CASE("lead exemption is visible in the trace", "[pipeline]")
{
    PipelineConfig config;
    auto backend = test::fake(Role::decontext, [](backends::json const& req) {
        return backends::with_metadata({{"output", decontext::reference_rewrite(req["input"].get<std::string>())}},
                                       "counting");
    });
    auto registry = test::registry_with(backend);
    auto samples = fixture();
    int expected_calls = 0;
    for (auto const& s: samples) {
        auto r = run_document(s.document, config, registry);
        for (auto const& rec: trace_json(r)) {
            bool called = rec["decontext_called"].get<bool>();
            if (rec["sentence_index"] == 0) {
                CHECK_FALSE(called);
            }
            expected_calls += called ? 1 : 0;
        }
    }
    CHECK(backend->calls == expected_calls);

    config.exempt_lead = false;
    auto r = run_document(samples.at(1).document, config, registry);
    auto trace = trace_json(r);
    CHECK(std::any_of(trace.begin(), trace.end(), [](auto const& t) {
        return t["sentence_index"] == 0 && t["decontext_called"].template get<bool>();
    }));
}

TEST_CASE("lead scorer finds lead gold claims", "[pipeline]")
{
    PipelineConfig config;
    config.scoring.scorer = extraction::Scorer::lead;
    auto registry = backends::BackendRegistry::with_references();
    std::vector<corpus::ExtractionSample> samples{
        sample("a", {"Prices rose 5 percent.", "Shoppers noticed.", "Shops adapted."}, "Prices rose 5 percent."),
        sample("b", {"The mayor resigned on Friday.", "Nobody was surprised."}, "The mayor resigned on Friday."),
    };
    auto run = run_corpus(samples, config, registry);
    CHECK(report(run.summary, "extraction.P@1").aggregate == 100.0);
    CHECK(report(run.summary, "extraction.P@1").note.find("circular") != std::string::npos);
}

TEST_CASE("corpus runs", "[pipeline]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    CHECK_THROWS_AS(run_corpus({}, config, registry), NoDataError);

    auto samples = fixture();
    auto run = run_corpus(samples, config, registry);
    CHECK(run.results.size() == samples.size());
    CHECK(run.summary.documents == samples.size());
    CHECK(run.summary.categories.total() == samples.size());
    CHECK(run.summary.failures.empty());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(run.results[i].document_id == samples[i].document.id);
    }
    double previous = -1;
    for (std::size_t k: evaluation::kDefaultKs) {
        auto r = report(run.summary, "extraction.P@" + std::to_string(k));
        CHECK(r.aggregate >= previous);
        previous = r.aggregate;
    }
}

TEST_CASE("corpus runs are deterministic across worker counts", "[pipeline][property]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    auto samples = fixture();
    auto one = serialized(run_corpus(samples, config, registry));
    CHECK(serialized(run_corpus(samples, config, registry)) == one);
    config.workers = 4;
    CHECK(serialized(run_corpus(samples, config, registry)) == one);
}

TEST_CASE("a failing document does not stop the corpus", "[pipeline]")
{
    PipelineConfig config;
    config.workers = 3;
    auto registry = test::registry_with(test::fake(Role::checkworthy, [](backends::json const& req) {
        auto text = req["text"].get<std::string>();
        if (text.find("Explosive") != std::string::npos) {
            throw std::runtime_error("classifier crashed");
        }
        auto s = checkworthy::reference_classify(text);
        return backends::with_metadata({{"cfs", s.cfs}, {"ufs", s.ufs}, {"nfs", s.nfs}}, "flaky");
    }));
    auto samples = fixture();
    samples.push_back(sample("explosive", {"Explosive claims were made.", "Nobody checked."}, "Explosive claims."));
    auto run = run_corpus(samples, config, registry);
    REQUIRE(run.results.size() == samples.size());
    auto const& bad = run.results.back();
    CHECK_FALSE(bad.ok());
    CHECK(bad.failed_stage == "classify");
    CHECK(bad.error.find("classifier crashed") != std::string::npos);
    REQUIRE(run.summary.failures.size() == 1);
    CHECK(run.summary.failures[0].document_id == "explosive");
    CHECK(run.summary.documents == samples.size() - 1);
    CHECK(run.summary.categories.total() == samples.size() - 1);
    auto j = to_json(bad);
    CHECK(j["status"] == "failed");
    CHECK(j["stage"] == "classify");
}

TEST_CASE("original and decontextualised chrF differ only on feasible winners", "[pipeline][property]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    auto samples = fixture();
    auto run = run_corpus(samples, config, registry);
    auto original = report(run.summary, "claim.chrf.original");
    auto rewritten = report(run.summary, "claim.chrf.decontextualised");
    REQUIRE(original.per_item.size() == rewritten.per_item.size());
    for (std::size_t i = 0; i < original.per_item.size(); ++i) {
        auto const& id = original.per_item[i].first;
        auto it = std::find_if(run.results.begin(), run.results.end(), [&](auto const& r) { return r.document_id == id; });
        REQUIRE(it != run.results.end());
        if (it->selected_candidate().decontext.category != Category::feasible) {
            CHECK(original.per_item[i].second == rewritten.per_item[i].second);
        }
    }
}

TEST_CASE("results files round trip", "[pipeline]")
{
    PipelineConfig config;
    auto registry = backends::BackendRegistry::with_references();
    auto samples = fixture();
    auto run = run_corpus(samples, config, registry);
    std::stringstream buffer;
    write_results(buffer, run.results);
    auto file = read_results(buffer);
    REQUIRE(file.outcomes.size() == run.results.size());
    std::vector<ClaimOutcome> outcomes;
    for (auto const& r: run.results) {
        outcomes.push_back(outcome(r));
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        CHECK(file.outcomes[i].document_id == outcomes[i].document_id);
        CHECK(file.outcomes[i].claim_text == outcomes[i].claim_text);
        CHECK(file.outcomes[i].ranking == outcomes[i].ranking);
        CHECK(file.outcomes[i].category == outcomes[i].category);
    }
    auto again = evaluate(file.outcomes, samples, config);
    CHECK(to_json(again).dump() == to_json(run.summary).dump());
}

TEST_CASE("registry must cover every role", "[pipeline]")
{
    PipelineConfig config;
    backends::BackendRegistry partial;
    partial.register_backend(backends::make_reference_backend(Role::summarizer));
    auto samples = fixture();
    CHECK_THROWS_AS(run_corpus(samples, config, partial), backends::BackendError);
}
