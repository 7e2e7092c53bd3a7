#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "claimforge/decontext.hpp"
#include "claimforge/error.hpp"
#include "claimforge/evaluation.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace claimforge;
using namespace claimforge::evaluation;

namespace {

auto random_text(std::mt19937& rng, std::size_t max_len) -> std::string
{
    static std::vector<std::string> const alphabet{"a", "b", "c", "d", " ", " ", "  ", "\xC3\xA9", "\xE2\x82\xAC", "e"};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string out;
    for (std::size_t i = len(rng); i > 0; --i) {
        out += alphabet[pick(rng)];
    }
    return out;
}

auto item(std::string id, std::vector<std::size_t> ranked, std::size_t gold) -> RankedItem
{
    return {std::move(id), std::move(ranked), gold};
}

}  // namespace

TEST_CASE("chrf examples", "[evaluation]")
{
    CHECK(chrf("Bird cuts scooters.", "Bird cuts scooters.") == 100.0);
    CHECK(chrf("ab", "cd") == 0.0);
    CHECK(chrf("abcd", "abce") == Approx(100.0 * (0.75 + 2.0 / 3.0 + 0.5 + 0.0) / 4.0).epsilon(1e-14));
    CHECK(chrf("abcd", "abce") == Approx(test::oracle_chrf("abcd", "abce")).margin(1e-12));
    CHECK(chrf("", "") == 100.0);
    CHECK(chrf("", "x") == 0.0);
    CHECK(chrf("a  b", " a b ") == 100.0);
    CHECK_THROWS_AS(chrf("a", "b", {0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(chrf("a", "b", {6, 0.0}), InvalidArgument);
}

TEST_CASE("chrf agrees with the brute force counter", "[evaluation][oracle]")
{
    std::mt19937 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto a = random_text(rng, 14);
        auto b = random_text(rng, 14);
        CHECK(std::abs(chrf(a, b) - test::oracle_chrf(a, b)) < 1e-9);
        CHECK(std::abs(chrf(a, b, {3, 1.0}) - test::oracle_chrf(a, b, 3, 1.0)) < 1e-9);
    }
}

TEST_CASE("chrf properties", "[evaluation][property]")
{
    std::mt19937 rng(2);
    for (int i = 0; i < 200; ++i) {
        auto a = random_text(rng, 10);
        auto b = i % 4 == 0 ? a + " " : random_text(rng, 10);
        CHECK(chrf(a, b, {6, 1.0}) == Approx(chrf(b, a, {6, 1.0})).margin(1e-12));
        bool equal = text::collapse_whitespace(a) == text::collapse_whitespace(b);
        CHECK((chrf(a, b) == 100.0) == equal);
        CHECK(chrf(a, b) >= 0.0);
        CHECK(chrf(a, b) <= 100.0);
    }
}

TEST_CASE("sari examples", "[evaluation]")
{
    CHECK(sari("the cat sat", "the cat sat", {"the cat sat"}) == Approx(100.0));
    double to_ref = sari("a b c", "a b d", {"a b d"});
    double unchanged = sari("a b c", "a b c", {"a b d"});
    CHECK(to_ref > unchanged);
    CHECK(to_ref == Approx(test::oracle_sari("a b c", "a b d", {"a b d"})).margin(1e-12));
    CHECK(unchanged == Approx(test::oracle_sari("a b c", "a b c", {"a b d"})).margin(1e-12));
    // Empty hypothesis, reference sharing nothing: add-F1 is 0 at every order.
    CHECK(sari("x y", "", {"p q"}) == Approx(test::oracle_sari("x y", "", {"p q"})));
    CHECK_THROWS_AS(sari("a", "a", {}), InvalidArgument);
}

TEST_CASE("sari agrees with the brute force set arithmetic", "[evaluation][oracle]")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> nrefs(1, 3);
    for (int i = 0; i < 200; ++i) {
        auto src = test::random_sentence(rng, 0, 8, 6);
        auto hyp = test::random_sentence(rng, 0, 8, 6);
        std::vector<std::string> refs;
        for (int r = nrefs(rng); r > 0; --r) {
            refs.push_back(test::random_sentence(rng, 0, 8, 6));
        }
        double got = sari(src, hyp, refs);
        CHECK(std::abs(got - test::oracle_sari(src, hyp, refs)) < 1e-9);
        CHECK(got >= 0.0);
        CHECK(got <= 100.0);
    }
}

TEST_CASE("proxy gold sentence", "[evaluation]")
{
    auto document = test::doc({"The mayor spoke.", "Fuel prices rose sharply.", "Drivers cut trips."});
    CHECK(proxy_gold_sentence(document, "Fuel prices rose sharply.") == 1);
    CHECK(proxy_gold_sentence(test::doc({"Only one."}), "Unrelated claim.") == 0);
    std::string gold = "Fuel prices rose for drivers.";
    std::size_t best = 0;
    for (std::size_t i = 1; i < document.size(); ++i) {
        if (test::oracle_chrf(document.sentence(i), gold) > test::oracle_chrf(document.sentence(best), gold)) {
            best = i;
        }
    }
    CHECK(proxy_gold_sentence(document, gold) == best);
}

TEST_CASE("hit at k", "[evaluation]")
{
    CHECK(hit_at_k({4, 1, 2}, 4, 1));
    CHECK_FALSE(hit_at_k({0, 1, 2, 3, 4}, 3, 3));
    CHECK(hit_at_k({0, 1, 2, 3, 4}, 3, 5));
}

TEST_CASE("precision at k", "[evaluation]")
{
    std::vector<RankedItem> items;
    for (int i = 0; i < 10; ++i) {
        items.push_back(item("d" + std::to_string(i), {0, 1, 2, 3}, i < 6 ? 2 : 3));
    }
    auto reports = precision_at_k(items, {3, 1});
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].name == "P@1");
    CHECK(reports[0].aggregate == 0.0);
    CHECK(reports[1].name == "P@3");
    CHECK(reports[1].aggregate == Approx(60.0));
    CHECK(reports[1].k_values == std::vector<std::size_t>{3});
    CHECK(reports[1].per_item.size() == 10);
    CHECK(reports[1].per_item[0] == std::pair<std::string, double>{"d0", 1.0});

    CHECK(precision_at_k({item("a", {2, 0}, 2)}, {1})[0].aggregate == 100.0);
    CHECK_THROWS_AS(precision_at_k({}, {1}), NoDataError);
    CHECK_THROWS_AS(precision_at_k(items, {0}), InvalidArgument);
}

TEST_CASE("precision at k is non-decreasing in k", "[evaluation][property]")
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RankedItem> items;
        for (int d = 0; d < 12; ++d) {
            std::vector<std::size_t> ranked(10);
            std::iota(ranked.begin(), ranked.end(), 0);
            std::shuffle(ranked.begin(), ranked.end(), rng);
            items.push_back(item(std::to_string(d), ranked, static_cast<std::size_t>(d) % 10));
        }
        auto reports = precision_at_k(items, {1, 2, 3, 5, 8, 10});
        for (std::size_t i = 1; i < reports.size(); ++i) {
            CHECK(reports[i - 1].aggregate <= reports[i].aggregate);
        }
        CHECK(reports.back().aggregate == 100.0);
    }
    MetricReport high{"P@1", 50.0, {1}, {}, ""};
    MetricReport low{"P@3", 40.0, {3}, {}, ""};
    CHECK_THROWS_AS(check_monotone({high, low}), Error);
}

TEST_CASE("metric report json", "[evaluation]")
{
    MetricReport r{"P@3", 60.0, {3}, {{"a", 100.0}, {"b", 0.0}}, ""};
    auto j = to_json(r);
    CHECK(j.dump() == R"({"name":"P@3","aggregate":60.0,"k_values":[3],"per_item":[{"id":"a","value":100.0},{"id":"b","value":0.0}]})");
    auto back = report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.name == r.name);
    CHECK(back.per_item == r.per_item);
    MetricReport noted{"claim.chrf.original", 12.5, {}, {}, "note"};
    CHECK(to_json(noted).dump() == R"({"name":"claim.chrf.original","aggregate":12.5,"k_values":null,"per_item":[],"note":"note"})");
}

TEST_CASE("retrieval evaluation", "[evaluation]")
{
    std::stringstream evidence_file(
        R"({"claim_id":"c1","units":["Bird scraps scooters in Dubai.","The weather was mild.","Scooters were scrapped by Bird."],"gold_ids":[0,2]})"
        "\n"
        R"({"claim_id":"c2","units":["Obama spoke on Monday.","Stocks fell."],"gold_ids":[0]})"
        "\n");
    auto evidence = read_evidence(evidence_file);
    REQUIRE(evidence.size() == 2);
    std::stringstream claims_file(
        R"({"claim_id":"c1","variants":{"original":"It scraps scooters.","gold":"Bird scraps scooters."}})"
        "\n"
        R"({"claim_id":"c2","variants":{"original":"He spoke.","gold":"Obama spoke."}})"
        "\n");
    auto claims = read_claim_variants(claims_file);
    auto reports = retrieval_eval(claims, evidence, {1, 2});
    REQUIRE(reports.size() == 4);
    for (auto const& r: reports) {
        CHECK(r.aggregate <= 100.0);
        CHECK(r.aggregate >= 0.0);
    }
    auto find = [&](std::string const& name) {
        auto it = std::find_if(reports.begin(), reports.end(), [&](auto const& r) { return r.name == name; });
        REQUIRE(it != reports.end());
        return *it;
    };
    CHECK(find("retrieval.gold.P@1").aggregate == 100.0);
    CHECK(find("retrieval.gold.P@2").aggregate == Approx(75.0));

    // brute force: score every unit, sort, count gold in the top k
    for (auto const& c: claims) {
        auto const& ev = c.claim_id == "c1" ? evidence[0] : evidence[1];
        for (auto const& [variant, text]: c.variants) {
            auto index = ir::Bm25Index::build(ev.units);
            std::vector<double> scores;
            for (std::size_t u = 0; u < ev.units.size(); ++u) {
                scores.push_back(index.score(text, u));
            }
            auto order = test::oracle_rank(scores);
            for (std::size_t k: {1, 2}) {
                double hits = 0;
                for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
                    hits += std::count(ev.gold_ids.begin(), ev.gold_ids.end(), order[i]) > 0 ? 1 : 0;
                }
                CHECK(retrieval_precision(text, ev, k) == Approx(hits / static_cast<double>(k)));
            }
        }
    }

    std::stringstream bad(R"({"claim_id":"x","units":["a"],"gold_ids":[3]})" "\n");
    CHECK_THROWS(read_evidence(bad));
}

TEST_CASE("identical variants score identically", "[evaluation]")
{
    std::vector<EvidenceSet> evidence{{"c", {"alpha beta", "gamma delta", "beta gamma"}, {1}}};
    std::vector<ClaimVariants> claims{{"c", {{"x", "gamma beta"}, {"y", "gamma beta"}}}};
    auto reports = retrieval_eval(claims, evidence, {1, 3});
    CHECK(reports[0].aggregate == reports[2].aggregate);
    CHECK(reports[1].aggregate == reports[3].aggregate);
}

TEST_CASE("category counts", "[evaluation]")
{
    using decontext::Category;
    std::vector<decontext::DecontextResult> all(4, {Category::unnecessary, "x", 0, ""});
    CHECK(category_stats(all) == CategoryCounts{0, 0, 4});
    CHECK(category_stats({}) == CategoryCounts{0, 0, 0});
    all[1].category = Category::feasible;
    all[2].category = Category::infeasible;
    auto mixed = category_stats(all);
    CHECK(mixed == CategoryCounts{1, 1, 2});
    CHECK(mixed.total() == all.size());
}
