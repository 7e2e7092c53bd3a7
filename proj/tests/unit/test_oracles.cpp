#include <catch2/catch.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace claimforge::test;

TEST_CASE("oracle self checks", "[oracle]")
{
    CHECK(oracle_chrf("abcd", "abce") == Approx(100.0 * (0.75 + 2.0 / 3.0 + 0.5) / 4.0));
    CHECK(oracle_chrf("x", "x") == 100.0);
    CHECK(oracle_sari("a b c", "a b c", {"a b c"}) == Approx(100.0));

    auto e = jacobi_eigen({{2, 1}, {1, 2}});
    CHECK(e.values[0] == Approx(3.0));
    CHECK(e.values[1] == Approx(1.0));
    CHECK(std::abs(e.vectors[0][0]) == Approx(std::sqrt(0.5)));

    auto scores = oracle_bm25({"solo"}, "solo");
    CHECK(scores[0] == Approx(std::log(1.0 + 0.5 / 1.5)));
    CHECK(oracle_rank({0.5, 1.0, 0.5}) == std::vector<std::size_t>{1, 0, 2});

    auto tr = oracle_textrank({"a b", "c d"});
    CHECK(tr[0] == Approx(0.15));
    CHECK(tr[1] == Approx(0.15));
}
