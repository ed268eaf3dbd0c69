#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sepselect/stats.hpp"

using namespace sepselect;

TEST_CASE("rank_rows ranks best-first with tie averaging") {
    auto table = rank_rows({{0.9, 0.8, 0.7}, {0.9, 0.9, 0.7}}, true);
    CHECK(table.ranks[0] == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(table.ranks[1] == std::vector<double>{1.5, 1.5, 3.0});

    auto two = rank_rows({{0.9, 0.8, 0.7}, {0.8, 0.9, 0.7}}, true);
    CHECK(two.avg_ranks == std::vector<double>{1.5, 1.5, 3.0});

    // lower-is-better flips the order
    auto flipped = rank_rows({{0.9, 0.8, 0.7}, {0.9, 0.8, 0.7}}, false);
    CHECK(flipped.ranks[0] == std::vector<double>{3.0, 2.0, 1.0});
}

TEST_CASE("rank_rows row sums equal s(s+1)/2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t rows = 2 + rng() % 6, cols = 2 + rng() % 6;
        std::vector<std::vector<double>> scores(rows, std::vector<double>(cols));
        for (auto& r : scores)
            for (auto& v : r) v = val(rng);
        auto table = rank_rows(scores, true);
        for (const auto& r : table.ranks) {
            double sum = 0.0;
            for (double x : r) sum += x;
            CHECK(sum == doctest::Approx(cols * (cols + 1) / 2.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("rank_rows is invariant under strictly monotone transforms") {
    std::vector<std::vector<double>> scores = {{0.2, 0.5, 0.9, 0.4}, {0.8, 0.1, 0.3, 0.6}};
    auto base = rank_rows(scores, true);
    auto transformed = scores;
    for (auto& row : transformed)
        for (auto& v : row) v = std::exp(3.0 * v) + 1.0;
    auto got = rank_rows(transformed, true);
    CHECK(got.ranks == base.ranks);
}

TEST_CASE("rank_rows rejects bad input") {
    CHECK_THROWS_AS(rank_rows({{1.0, 2.0}}, true), std::invalid_argument);
    CHECK_THROWS_AS(rank_rows({{1.0}, {2.0}}, true), std::invalid_argument);
    CHECK_THROWS_AS(
        rank_rows({{1.0, std::numeric_limits<double>::infinity()}, {1.0, 2.0}}, true),
        std::invalid_argument);
}

TEST_CASE("friedman reproduces the 2x3 worked example") {
    auto table = rank_rows({{0.9, 0.8, 0.7}, {0.8, 0.9, 0.7}}, true);
    auto result = friedman(table);
    CHECK(result.chi2 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(result.f_stat == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(result.dof1 == 2);
    CHECK(result.dof2 == 2);
    CHECK(result.significant(2.9));
    CHECK(!result.significant(3.1));
}

TEST_CASE("friedman on all-tied scores gives zero") {
    auto table = rank_rows({{0.5, 0.5, 0.5}, {0.7, 0.7, 0.7}}, true);
    auto result = friedman(table);
    CHECK(result.chi2 == 0.0);
    CHECK(result.f_stat == 0.0);
}

TEST_CASE("friedman perfect agreement is an explicit error") {
    // tie-free identical orderings on every dataset: chi2 = N(s-1)
    auto table = rank_rows({{0.9, 0.8, 0.7}, {0.6, 0.5, 0.4}, {0.3, 0.2, 0.1}}, true);
    CHECK_THROWS_AS(friedman(table), FriedmanDegenerate);
}

TEST_CASE("friedman degrees of freedom for a 9-algorithm, 10-dataset table") {
    std::mt19937_64 rng(333);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::vector<std::vector<double>> scores(10, std::vector<double>(9));
    for (auto& r : scores)
        for (auto& v : r) v = val(rng);
    auto result = friedman(rank_rows(scores, true));
    CHECK(result.dof1 == 8);
    CHECK(result.dof2 == 72);
    // F(8, 72) critical value at the 0.05 level
    CHECK(result.significant(2.0698) == (result.f_stat > 2.0698));
}

TEST_CASE("nemenyi_cd reproduces the published value") {
    CHECK(nemenyi_cd(9, 10, 3.1020) == doctest::Approx(3.7992).epsilon(3e-5));
    CHECK(nemenyi_cd(2, 6, 1.0) == doctest::Approx(std::sqrt(6.0 / 36.0)).epsilon(1e-12));
    CHECK(nemenyi_cd(5, 3, 0.0) == 0.0);
}

TEST_CASE("nemenyi_cd monotonicity") {
    const double q = 2.5;
    CHECK(nemenyi_cd(5, 10, q) < nemenyi_cd(5, 5, q));   // decreasing in N
    CHECK(nemenyi_cd(6, 10, q) > nemenyi_cd(5, 10, q));  // increasing in s
}

TEST_CASE("nemenyi q table") {
    CHECK(nemenyi_q_alpha(0.05, 9) == doctest::Approx(3.102).epsilon(1e-12));
    CHECK(nemenyi_q_alpha(0.05, 2) == doctest::Approx(1.960).epsilon(1e-12));
    CHECK(nemenyi_q_alpha(0.10, 9) == doctest::Approx(2.855).epsilon(1e-12));
    CHECK_THROWS_AS(nemenyi_q_alpha(0.01, 9), std::invalid_argument);
    CHECK_THROWS_AS(nemenyi_q_alpha(0.05, 11), std::invalid_argument);
}

TEST_CASE("chi2 is zero only when average ranks coincide (tie-free)") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::vector<double>> scores(4, std::vector<double>(3));
        for (auto& r : scores)
            for (auto& v : r) v = val(rng);
        auto table = rank_rows(scores, true);
        double spread = 0.0;
        for (double r : table.avg_ranks)
            spread = std::max(spread, std::abs(r - table.avg_ranks[0]));
        try {
            auto result = friedman(table);
            if (spread < 1e-9)
                CHECK(result.chi2 == doctest::Approx(0.0).epsilon(1e-9));
            else
                CHECK(result.chi2 > 0.0);
        } catch (const FriedmanDegenerate&) {
            CHECK(spread > 0.0);  // only perfect agreement degenerates
        }
    }
}
