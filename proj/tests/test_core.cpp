#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "agghoo/core.hpp"
#include "agghoo/rng.hpp"

#include "helpers.hpp"

using namespace agghoo;
using namespace testutil;

TEST_CASE("dataset invariants are enforced") {
    CHECK_THROWS(Dataset(2, 2, {0.0, 1.0}, {0, 1}));      // feature/label mismatch
    CHECK_THROWS(Dataset(1, 2, {0.0, 1.0}, {0, 2}));      // label out of range
    CHECK_THROWS(Dataset(1, 2, {}, {}));                  // empty
    CHECK_THROWS(Dataset(1, 1, {0.0}, {0}));              // fewer than two classes
    const Dataset d(1, 3, {0.0, 1.0}, {0, 2});
    CHECK(d.size() == 2);
    CHECK(d.class_count() == 3);
    CHECK(d.row(1)[0] == 1.0);
}

TEST_CASE("index sets are sorted, unique and complementable") {
    CHECK_THROWS(IndexSet::of({1, 1}));
    CHECK_THROWS(IndexSet::of({-1}));
    CHECK_THROWS(IndexSet::of({}));
    const IndexSet s = IndexSet::of({4, 0, 2});
    CHECK(s.indices() == std::vector<int>{0, 2, 4});
    const IndexSet c = s.complement(6);
    CHECK(c.indices() == std::vector<int>{1, 3, 5});
    CHECK_THROWS(IndexSet::all(6).complement(6));  // empty complement
    CHECK(IndexSet::of({0}).complement(3).size() == 2);
}

TEST_CASE("empirical risk counts errors exactly") {
    const auto data = indexed_dataset({0, 1, 1});
    const IndexSet all = IndexSet::all(3);

    SUBCASE("perfect classifier scores zero") {
        const auto perfect = fn_classifier(
            [&](std::span<const double> x) { return data->label(static_cast<int>(x[0])); });
        CHECK(empirical_risk(*perfect, *data, all) == 0.0);
    }
    SUBCASE("constant zero on labels (0,1,1) scores 2/3") {
        CHECK(empirical_risk(*constant_classifier(0), *data, all) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("empty evaluation set is an error") {
        CHECK_THROWS_WITH_AS(empirical_risk(*constant_classifier(0), *data, IndexSet()),
                             "empirical_risk: empty evaluation set", std::invalid_argument);
    }
}

TEST_CASE("empirical risk equals an independent per-row recount") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Label> labels(10);
        std::vector<Label> predictions(10);
        for (auto& y : labels) y = static_cast<Label>(rng.next_below(2));
        for (auto& y : predictions) y = static_cast<Label>(rng.next_below(2));
        const auto data = indexed_dataset(labels);
        const auto f = fn_classifier(
            [predictions](std::span<const double> x) { return predictions[static_cast<int>(x[0])]; });

        const int b_size = 1 + static_cast<int>(rng.next_below(10));
        const IndexSet b = IndexSet::of(rng.sample_without_replacement(10, b_size));

        int errors = 0;
        for (const int i : b.indices())
            if (predictions[i] != labels[i]) ++errors;
        CHECK(empirical_risk(*f, *data, b) == static_cast<double>(errors) / b.size());
    }
}

TEST_CASE("risk over a disjoint union is the size-weighted average of the parts") {
    Rng rng(7);
    std::vector<Label> labels(30);
    for (auto& y : labels) y = static_cast<Label>(rng.next_below(2));
    const auto data = indexed_dataset(labels);
    const auto f = fn_classifier([](std::span<const double> x) {
        return static_cast<int>(x[0]) % 3 == 0 ? 1 : 0;
    });

    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_below(29));
        const IndexSet b1 = IndexSet::of(rng.sample_without_replacement(30, k));
        const IndexSet b2 = b1.complement(30);
        const double merged = empirical_risk(*f, *data, IndexSet::all(30));
        const double weighted = (b1.size() * empirical_risk(*f, *data, b1) +
                                 b2.size() * empirical_risk(*f, *data, b2)) /
                                30.0;
        CHECK(merged == doctest::Approx(weighted).epsilon(1e-12));
        CHECK(merged >= 0.0);
        CHECK(merged <= 1.0);
    }
}

TEST_CASE("test risk and excess risk") {
    const auto data = indexed_dataset({1});
    SUBCASE("single wrong prediction gives risk one") {
        CHECK(test_risk(*constant_classifier(0), *data) == 1.0);
    }
    SUBCASE("excess of a classifier against itself is zero") {
        CHECK(excess_risk_estimate(*constant_classifier(0), *constant_classifier(0), *data) == 0.0);
    }
    SUBCASE("worse classifier has positive excess") {
        const auto good = constant_classifier(1);
        const auto bad = constant_classifier(0);
        CHECK(excess_risk_estimate(*bad, *good, *data) == 1.0);
    }
    SUBCASE("excess may be negative and is not clamped") {
        const auto better = constant_classifier(1);
        const auto worse = constant_classifier(0);
        CHECK(excess_risk_estimate(*better, *worse, *data) == -1.0);
    }
}

TEST_CASE("classifier predictions are stable under repetition") {
    Rng rng(3);
    std::vector<Label> labels(20);
    for (auto& y : labels) y = static_cast<Label>(rng.next_below(2));
    const auto data = indexed_dataset(labels);
    const auto rule = memorizing_rule("memo");
    const auto f = rule.train(data);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = rng.next_unit() * 20.0;
        const std::span<const double> xs(&x, 1);
        const Label first = f->predict(xs);
        for (int rep = 0; rep < 5; ++rep) CHECK(f->predict(xs) == first);
    }
}

TEST_CASE("normal deviates have the right first two moments") {
    Rng rng(12345);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("subset materializes the selected rows in order") {
    const auto data = dataset_2d({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 1, 0, 1});
    const auto sub = subset(*data, IndexSet::of({3, 1}));
    CHECK(sub->size() == 2);
    CHECK(sub->row(0)[0] == 1.0);
    CHECK(sub->row(1)[0] == 3.0);
    CHECK(sub->label(0) == 1);
    CHECK(sub->label(1) == 1);
    CHECK(sub->class_count() == data->class_count());
}
