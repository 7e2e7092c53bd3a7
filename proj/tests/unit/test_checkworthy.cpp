#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "claimforge/backends.hpp"
#include "claimforge/checkworthy.hpp"
#include "claimforge/decontext.hpp"
#include "claimforge/error.hpp"
#include "fixtures.hpp"

using namespace claimforge;
using namespace claimforge::checkworthy;
using decontext::Category;
using decontext::DecontextResult;

namespace {

enum class Top { cfs, ufs, nfs };

auto top(CheckworthinessScore const& s) -> Top
{
    if (s.cfs >= s.ufs && s.cfs >= s.nfs) {
        return Top::cfs;
    }
    return s.nfs >= s.ufs ? Top::nfs : Top::ufs;
}

auto candidate(std::size_t index, std::string text) -> DecontextResult
{
    return {Category::unnecessary, std::move(text), index, ""};
}

}  // namespace

TEST_CASE("reference classifier hand cases", "[checkworthy]")
{
    auto question = reference_classify("Is this true?");
    CHECK(top(question) == Top::nfs);
    // cfs 0.1, nfs 0.1 + 1.0, ufs floor 0.1; normalized by 1.3
    CHECK(question.cfs == Approx(0.1 / 1.3));
    CHECK(question.nfs == Approx(1.1 / 1.3));

    CHECK(top(reference_classify("Bird is scrapping thousands of e-scooters in the Middle East.")) == Top::cfs);
    CHECK(top(reference_classify("I think the stadium is a waste of public funds!")) == Top::nfs);
    CHECK(top(reference_classify("Riders will lose access soon.")) == Top::ufs);
}

TEST_CASE("classifier outputs are distributions", "[checkworthy][property]")
{
    std::mt19937 rng(8);
    std::vector<std::string> extras{"", " 42", " thousands", " said", "?", "!", " I think"};
    for (int i = 0; i < 100; ++i) {
        auto s = test::random_sentence(rng, 1, 10) + extras[static_cast<std::size_t>(i) % extras.size()];
        auto score = reference_classify(s);
        for (double v: {score.cfs, score.ufs, score.nfs}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(std::abs(score.cfs + score.ufs + score.nfs - 1.0) < 1e-6);
    }
}

TEST_CASE("classify rejects empty text and validates the backend", "[checkworthy]")
{
    auto registry = backends::BackendRegistry::with_references();
    CHECK_THROWS_AS(classify("", registry), InvalidArgument);
    auto bad = test::registry_with(test::fake(backends::Role::checkworthy, [](auto const&) {
        return backends::with_metadata({{"cfs", 0.5}, {"ufs", 0.5}, {"nfs", 0.5}}, "bad");
    }));
    CHECK_THROWS_AS(classify("Some text.", bad), backends::BackendError);
}

TEST_CASE("select claim argmax and tie-break", "[checkworthy]")
{
    std::vector<DecontextResult> one{candidate(2, "Only one.")};
    CHECK(select_claim(one, {{0.2, 0.5, 0.3}}).claim_text == "Only one.");

    std::vector<DecontextResult> two{candidate(0, "Low."), candidate(4, "High.")};
    auto pick = select_claim(two, {{0.4, 0.3, 0.3}, {0.7, 0.2, 0.1}});
    CHECK(pick.claim_text == "High.");
    CHECK(pick.source_sentence_index == 4);
    CHECK(pick.cfs_score == 0.7);
    CHECK(pick.candidate_scores == std::vector<std::pair<std::size_t, double>>{{0, 0.4}, {4, 0.7}});

    std::vector<DecontextResult> tied{candidate(5, "Later."), candidate(1, "Earlier.")};
    auto tie = select_claim(tied, {{0.6, 0.2, 0.2}, {0.6, 0.3, 0.1}});
    CHECK(tie.source_sentence_index == 1);
    CHECK(tie.claim_text == "Earlier.");

    CHECK_THROWS_AS(select_claim({}, std::vector<CheckworthinessScore>{}), InvalidArgument);
    CHECK_THROWS_AS(select_claim(two, {{0.4, 0.3, 0.3}}), InvalidArgument);
}

TEST_CASE("selection is invariant under increasing transforms", "[checkworthy][property]")
{
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<DecontextResult> cands;
        std::vector<CheckworthinessScore> scores;
        std::vector<CheckworthinessScore> transformed;
        for (std::size_t i = 0; i < 5; ++i) {
            cands.push_back(candidate(i * 2, "Candidate " + std::to_string(i) + "."));
            double cfs = trial % 2 == 0 ? u(rng) : coarse(rng) / 4.0;
            scores.push_back({cfs, 1 - cfs, 0});
            double t = std::pow(cfs, 3.0) / 2 + 0.1;
            transformed.push_back({t, 1 - t, 0});
        }
        std::shuffle(cands.begin(), cands.end(), rng);
        auto a = select_claim(cands, scores);
        auto b = select_claim(cands, transformed);
        CHECK(a.source_sentence_index == b.source_sentence_index);
        bool is_input = std::any_of(cands.begin(), cands.end(), [&](auto const& c) {
            return c.text == a.claim_text && c.original_index == a.source_sentence_index;
        });
        CHECK(is_input);
        double best = 0;
        for (auto const& s: scores) {
            best = std::max(best, s.cfs);
        }
        CHECK(a.cfs_score == best);
    }
}

TEST_CASE("select through the registry", "[checkworthy]")
{
    auto registry = backends::BackendRegistry::with_references();
    std::vector<DecontextResult> cands{candidate(0, "Is this true?"),
                                       candidate(1, "The city recorded 312 new cases in 2019.")};
    CHECK(select_claim(cands, registry).source_sentence_index == 1);
}
