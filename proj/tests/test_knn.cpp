#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "agghoo/knn.hpp"
#include "agghoo/rng.hpp"

#include "helpers.hpp"

using namespace agghoo;
using namespace testutil;

TEST_CASE("parameter validation") {
    const auto data = dataset_2d({{0, 0}, {1, 1}, {2, 2}}, {0, 1, 0});
    CHECK_THROWS(knn_train(2, data));   // even k
    CHECK_THROWS(knn_train(5, data));   // k > n
    CHECK_THROWS(knn_train(0, data));
    CHECK_NOTHROW(knn_train(3, data));
}

TEST_CASE("k=1 at a training point returns its label") {
    const auto data = dataset_2d({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 1, 1, 0});
    const auto f = knn_train(1, data);
    for (int i = 0; i < data->size(); ++i) CHECK(f->predict(data->row(i)) == data->label(i));
}

TEST_CASE("k=n predicts the constant majority label everywhere") {
    // seven of nine rows carry label 1
    std::vector<std::pair<double, double>> pts;
    std::vector<Label> labels;
    Rng rng(2);
    for (int i = 0; i < 9; ++i) {
        pts.emplace_back(rng.next_unit(), rng.next_unit());
        labels.push_back(i < 7 ? 1 : 0);
    }
    const auto data = dataset_2d(pts, labels);
    const auto f = knn_train(9, data);
    for (int t = 0; t < 100; ++t) {
        const double x[2] = {rng.next_unit() * 3 - 1, rng.next_unit() * 3 - 1};
        CHECK(f->predict(x) == 1);
    }
}

TEST_CASE("k=3 matches an exhaustive distance sort on a hand-built planar set") {
    const auto data = dataset_2d({{0.0, 0.0}, {0.1, 0.0}, {1.0, 1.0}, {1.1, 1.0}, {0.5, 0.4}},
                                 {0, 0, 1, 1, 1});
    const auto f = knn_train(3, data);
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        const double x[2] = {rng.next_unit() * 1.5 - 0.2, rng.next_unit() * 1.5 - 0.2};
        // oracle: full sort by (squared distance, row index)
        std::vector<std::pair<double, int>> order;
        for (int i = 0; i < data->size(); ++i) {
            const auto r = data->row(i);
            const double d = (r[0] - x[0]) * (r[0] - x[0]) + (r[1] - x[1]) * (r[1] - x[1]);
            order.emplace_back(d, i);
        }
        std::sort(order.begin(), order.end());
        int ones = 0;
        for (int i = 0; i < 3; ++i) ones += data->label(order[i].second);
        const Label expected = ones >= 2 ? 1 : 0;
        CHECK(f->predict(x) == expected);
    }
}

TEST_CASE("distance ties break toward the smaller row index") {
    // two training points equidistant from the query, opposite labels
    const auto data = dataset_2d({{1.0, 0.0}, {-1.0, 0.0}, {5.0, 5.0}}, {1, 0, 0});
    const auto f = knn_train(1, data);
    const double x[2] = {0.0, 0.0};
    CHECK(f->predict(x) == 1);  // row 0 wins the tie
}

TEST_CASE("repeated training gives identical behavior") {
    Rng rng(6);
    std::vector<std::pair<double, double>> pts;
    std::vector<Label> labels;
    for (int i = 0; i < 30; ++i) {
        pts.emplace_back(rng.next_unit(), rng.next_unit());
        labels.push_back(static_cast<Label>(rng.next_below(2)));
    }
    const auto data = dataset_2d(pts, labels);
    const auto rule = knn_rule(5);
    const auto f1 = rule.train(data);
    const auto f2 = rule.train(data);
    for (int t = 0; t < 200; ++t) {
        const double x[2] = {rng.next_unit(), rng.next_unit()};
        CHECK(f1->predict(x) == f2->predict(x));
    }
}

TEST_CASE("the family enumerates odd k with ordered ids") {
    const auto family = knn_family(9);
    REQUIRE(family.size() == 5);
    CHECK(family[0].id == "knn-k=001");
    CHECK(family[4].id == "knn-k=009");
    for (std::size_t g = 1; g < family.size(); ++g) CHECK(family[g - 1].id < family[g].id);
}
