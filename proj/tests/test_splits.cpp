#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "json.hpp"

#include "agghoo/splits.hpp"

using namespace agghoo;

TEST_CASE("monte carlo plans have forced cardinality and are deterministic") {
    const SplitPlan plan = monte_carlo_splits(10, 0.5, 3, 17);
    CHECK(plan.V() == 3);
    CHECK(plan.train_size == 5);
    CHECK(plan.h2_strict);
    for (const auto& s : plan.sets) {
        CHECK(s.size() == 5);
        CHECK(s.valid_for(10));
    }
    const SplitPlan again = monte_carlo_splits(10, 0.5, 3, 17);
    for (int j = 0; j < 3; ++j) CHECK(plan.sets[j].indices() == again.sets[j].indices());
    const SplitPlan other = monte_carlo_splits(10, 0.5, 3, 18);
    bool all_equal = true;
    for (int j = 0; j < 3; ++j)
        if (plan.sets[j].indices() != other.sets[j].indices()) all_equal = false;
    CHECK_FALSE(all_equal);
}

TEST_CASE("monte carlo at the experiment scale") {
    const SplitPlan plan = monte_carlo_splits(500, 0.8, 10, 0);
    CHECK(plan.V() == 10);
    for (const auto& s : plan.sets) CHECK(s.size() == 400);
}

TEST_CASE("degenerate monte carlo fractions are rejected") {
    CHECK_THROWS_WITH_AS(monte_carlo_splits(10, 0.01, 1, 0), "monte_carlo_splits: degenerate split",
                         std::invalid_argument);
    CHECK_THROWS(monte_carlo_splits(10, 1.0, 1, 0));
    CHECK_THROWS(monte_carlo_splits(10, 0.5, 0, 0));
}

TEST_CASE("vfold partitions and flags non-divisible sizes") {
    SUBCASE("divisible") {
        const SplitPlan plan = vfold_splits(10, 5, 3);
        CHECK(plan.h2_strict);
        CHECK(plan.train_size == 8);
        std::multiset<int> fold_union;
        for (const auto& s : plan.sets) {
            CHECK(s.size() == 8);
            const IndexSet fold = s.complement(10);
            for (const int i : fold.indices()) fold_union.insert(i);
        }
        CHECK(fold_union.size() == 10);
        for (int i = 0; i < 10; ++i) CHECK(fold_union.count(i) == 1);
    }
    SUBCASE("non-divisible differs by one and is flagged") {
        const SplitPlan plan = vfold_splits(10, 3, 3);
        CHECK_FALSE(plan.h2_strict);
        std::multiset<int> sizes;
        for (const auto& s : plan.sets) sizes.insert(s.size());
        CHECK(sizes == std::multiset<int>{6, 7, 7});
        std::multiset<int> fold_union;
        for (const auto& s : plan.sets) {
            const IndexSet fold = s.complement(10);
            for (const int i : fold.indices()) fold_union.insert(i);
        }
        for (int i = 0; i < 10; ++i) CHECK(fold_union.count(i) == 1);
    }
    SUBCASE("experiment-scale ten-fold") {
        const SplitPlan plan = vfold_splits(500, 10, 0);
        CHECK(plan.train_size == 450);
        CHECK(plan.h2_strict);
    }
    SUBCASE("V above n is rejected") { CHECK_THROWS(vfold_splits(5, 6, 0)); }
}

TEST_CASE("each index lands in a monte carlo set with frequency about tau") {
    const int n = 20, draws = 10000;
    const double tau = 0.5;
    std::vector<int> hits(n, 0);
    for (int s = 0; s < draws; ++s) {
        const SplitPlan plan = monte_carlo_splits(n, tau, 1, static_cast<std::uint64_t>(s));
        for (const int i : plan.sets[0].indices()) ++hits[i];
    }
    const double expected = tau * draws;
    const double sigma = std::sqrt(draws * tau * (1.0 - tau));
    for (int i = 0; i < n; ++i) {
        CHECK(hits[i] > expected - 4.0 * sigma);
        CHECK(hits[i] < expected + 4.0 * sigma);
    }
}

TEST_CASE("plans serialize with full provenance") {
    const SplitPlan plan = monte_carlo_splits(12, 0.5, 2, 99);
    const auto j = nlohmann::json::parse(plan.to_json());
    CHECK(j["n"] == 12);
    CHECK(j["scheme"] == "monte-carlo");
    CHECK(j["V"] == 2);
    CHECK(j["seed"] == 99);
    CHECK(j["tau"] == 0.5);
    CHECK(j["sets"].size() == 2);
    for (int jdx = 0; jdx < 2; ++jdx) {
        const auto indices = j["sets"][jdx].get<std::vector<int>>();
        CHECK(indices == plan.sets[jdx].indices());
    }
}
