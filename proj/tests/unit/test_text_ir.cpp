#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace claimforge;
using Catch::Matchers::Equals;

TEST_CASE("tokenize lowercases and strips edge punctuation", "[ir]")
{
    CHECK_THAT(ir::tokenize("Bird is scrapping e-scooters."),
               Equals(std::vector<std::string>{"bird", "is", "scrapping", "e-scooters"}));
    CHECK(ir::tokenize("").empty());
    CHECK_THAT(ir::tokenize("A a A"), Equals(std::vector<std::string>{"a", "a", "a"}));
    CHECK_THAT(ir::tokenize("  \"Hello,\"  (world)! -- "), Equals(std::vector<std::string>{"hello", "world"}));
}

TEST_CASE("tokens never contain whitespace", "[ir]")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto s = test::random_sentence(rng, 1, 12) + " \t\n " + test::random_sentence(rng, 0, 4);
        for (auto const& t: ir::tokenize(s)) {
            CHECK(std::none_of(t.begin(), t.end(), [](char c) { return text::is_space(c); }));
            CHECK_FALSE(t.empty());
        }
    }
}

TEST_CASE("index statistics", "[ir]")
{
    auto index = ir::Bm25Index::build({"cat sat", "cat ran far away"});
    CHECK(index.doc_freq("cat") == 2);
    CHECK(index.doc_freq("sat") == 1);
    CHECK(index.doc_freq("dog") == 0);
    CHECK(index.avg_len() == 3.0);
    CHECK(index.unit(1).length() == 4);
    CHECK_THROWS_AS(ir::Bm25Index::build({}), InvalidArgument);
}

TEST_CASE("doc_freq table of a five sentence corpus", "[ir]")
{
    std::vector<std::string> units{
        "The mayor opened the bridge.", "The bridge was closed in May.", "Traffic returned to the bridge.",
        "The mayor thanked workers.",   "Workers were paid.",
    };
    auto index = ir::Bm25Index::build(units);
    CHECK(index.doc_freq("the") == 4);
    CHECK(index.doc_freq("bridge") == 3);
    CHECK(index.doc_freq("mayor") == 2);
    CHECK(index.doc_freq("workers") == 2);
    CHECK(index.doc_freq("may") == 1);
    CHECK(index.doc_freq("paid") == 1);
    CHECK(index.avg_len() == Approx((5.0 + 6 + 5 + 4 + 3) / 5.0));
    for (auto const& t: {"the", "bridge", "mayor", "workers", "traffic"}) {
        CHECK(index.doc_freq(t) <= index.size());
    }
}

TEST_CASE("bm25 single unit matches the formula", "[ir]")
{
    auto index = ir::Bm25Index::build({"solo"});
    // N=1, df=1, tf=1, len=avg_len: idf = ln(1 + 0.5/1.5), tf part = 2.2/2.2.
    double expected = std::log(1.0 + 0.5 / 1.5);
    CHECK(index.score("solo", 0) == Approx(expected).epsilon(1e-15));
    CHECK(index.score("absent", 0) == 0.0);
    CHECK_THROWS_AS(index.score("solo", 1), InvalidArgument);
}

TEST_CASE("query term multiplicity counts", "[ir]")
{
    auto index = ir::Bm25Index::build({"x y", "y z", "z w"});
    CHECK(index.score("x x", 0) == Approx(2.0 * index.score("x", 0)));
}

TEST_CASE("bm25 is a bag of words", "[ir]")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> units;
        for (int i = 0; i < 6; ++i) {
            units.push_back(test::random_sentence(rng, 2, 9, 15));
        }
        auto shuffled = units;
        auto words = text::split_whitespace(shuffled[2]);
        std::shuffle(words.begin(), words.end(), rng);
        shuffled[2] = text::join(words, " ");
        auto a = ir::Bm25Index::build(units);
        auto b = ir::Bm25Index::build(shuffled);
        auto query = test::random_sentence(rng, 1, 4, 15);
        CHECK(a.score(query, 2) == b.score(query, 2));
    }
}

TEST_CASE("retrieve ties break by unit id and k saturates", "[ir]")
{
    auto index = ir::Bm25Index::build({"alpha beta", "gamma", "alpha beta", "delta"});
    auto result = index.retrieve("alpha", 10);
    REQUIRE(result.size() == 4);
    CHECK(result[0].unit_id == 0);
    CHECK(result[1].unit_id == 2);
    CHECK(result[0].score == result[1].score);
    CHECK(result[2].unit_id == 1);
    CHECK(result[3].unit_id == 3);
    CHECK_THROWS_AS(index.retrieve("alpha", 0), InvalidArgument);
}

TEST_CASE("retrieve matches exhaustive scoring and is prefix consistent", "[ir][oracle]")
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::string> units;
        for (int i = 0; i < 12; ++i) {
            units.push_back(test::random_sentence(rng, 1, 10, 20));
        }
        auto index = ir::Bm25Index::build(units);
        auto query = test::random_sentence(rng, 1, 5, 20);
        auto oracle = test::oracle_bm25(units, query);
        auto expected = test::oracle_rank(oracle);
        auto full = index.retrieve(query, units.size());
        REQUIRE(full.size() == units.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(full[i].unit_id == expected[i]);
            CHECK(full[i].score == Approx(oracle[expected[i]]).margin(1e-12));
            if (i > 0) {
                CHECK(full[i - 1].score >= full[i].score);
            }
        }
        for (std::size_t k = 1; k <= units.size(); ++k) {
            auto part = index.retrieve(query, k);
            CHECK(std::equal(part.begin(), part.end(), full.begin()));
        }
    }
}

TEST_CASE("adding an unrelated unit leaves existing tf and len alone", "[ir]")
{
    std::vector<std::string> units{"river harbor river", "engine pepper"};
    auto before = ir::Bm25Index::build(units);
    units.push_back("violet marble signal");
    auto after = ir::Bm25Index::build(units);
    for (std::size_t id = 0; id < 2; ++id) {
        CHECK(before.unit(id).length() == after.unit(id).length());
        CHECK(before.unit(id).term_freq == after.unit(id).term_freq);
    }
    CHECK(after.score("river", 0) == Approx(test::oracle_bm25(units, "river")[0]));
}

TEST_CASE("text helpers", "[text]")
{
    CHECK(text::collapse_whitespace("  a \n\t b  ") == "a b");
    CHECK(text::trim("  x y ") == "x y");
    CHECK(text::strip_punctuation("(\"quoted\")") == "quoted");
    CHECK(text::is_pronoun("he"));
    CHECK_FALSE(text::is_pronoun("bird"));
    CHECK(text::is_determiner("the"));
    CHECK(text::is_name_like("Paris"));
    CHECK_FALSE(text::is_name_like("paris"));
    CHECK(text::content_tokens("The cat sat on the mat.") == std::vector<std::string>{"cat", "sat", "mat"});
}
