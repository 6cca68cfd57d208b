#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "agghoo/knn.hpp"
#include "agghoo/rng.hpp"
#include "agghoo/synthetic.hpp"

using namespace agghoo;

TEST_CASE("the sigmoid ridge function evaluates as expected") {
    CHECK(sigmoid_problem::g(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(sigmoid_problem::g(1.0, 1.0) == doctest::Approx(std::exp(-8.0) + 2.0));

    const auto bayes = bayes_sigmoid();
    const double origin[2] = {0.0, 0.0};
    const double corner[2] = {1.0, 1.0};
    CHECK(bayes->predict(origin) == 0);  // g = 1 < 1.18
    CHECK(bayes->predict(corner) == 1);  // g ~ 2.0003 >= 1.18
}

TEST_CASE("eta stays strictly inside (0,1) on the unit square") {
    for (double u = 0.0; u <= 1.0; u += 0.05) {
        for (double v = 0.0; v <= 1.0; v += 0.05) {
            const double e = sigmoid_problem::eta(u, v);
            CHECK(e > 0.0);
            CHECK(e < 1.0);
        }
    }
}

TEST_CASE("sampled label frequency matches the mean of eta") {
    const int n = 100000;
    const auto data = sample_sigmoid(n, 7);
    double ones = 0.0;
    for (int i = 0; i < n; ++i) ones += data->label(i);
    const double observed = ones / n;

    // E[Y] by the same Simpson quadrature machinery used for the Bayes risk
    int m = 400;
    const double h = 1.0 / m;
    auto weight = [m](int i) { return (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
    double total = 0.0;
    for (int i = 0; i <= m; ++i) {
        double row = 0.0;
        for (int j = 0; j <= m; ++j) row += weight(j) * sigmoid_problem::eta(i * h, j * h);
        total += weight(i) * row;
    }
    const double expected = total * h * h / 9.0;
    const double sigma = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::abs(observed - expected) < 4.0 * sigma);
}

TEST_CASE("sigmoid bayes risk integrates to the known level") {
    const double risk = bayes_risk_sigmoid(2000);
    CHECK(risk > 0.242 - 0.005);
    CHECK(risk < 0.242 + 0.005);
    CHECK(risk <= 0.5);

    SUBCASE("doubling the grid moves the value by less than 1e-4") {
        const double coarse = bayes_risk_sigmoid(1000);
        CHECK(std::abs(coarse - risk) < 1e-4);
    }
    SUBCASE("tiny grids are rejected") { CHECK_THROWS(bayes_risk_sigmoid(50)); }
}

TEST_CASE("gaussmix eta agrees with a direct density-ratio computation") {
    auto direct_eta = [](const std::vector<double>& x) {
        auto sq = [&](int j, double mean) { return (x[j - 1] - mean) * (x[j - 1] - mean); };
        double e1a = 0.0, e1b = 0.0, e0 = 0.0;
        for (int j = 1; j <= 3; ++j) e1a += sq(j, j);
        for (int j = 4; j <= 6; ++j) e1a += sq(j, 0);
        for (int j = 1; j <= 3; ++j) e1b += sq(j, 0);
        for (int j = 4; j <= 6; ++j) e1b += sq(j, j - 3);
        for (int j = 1; j <= 6; ++j) e0 += sq(j, 0);
        const double n1 = 0.7 * std::exp(-0.5 * e1a) + 0.3 * std::exp(-0.5 * e1b);
        const double n0 = std::exp(-0.5 * e0);
        return n1 / (n1 + n0);
    };

    SUBCASE("the origin belongs to class zero") {
        const std::vector<double> x(7, 0.0);
        CHECK(eta_gaussmix(x) == doctest::Approx(direct_eta(x)).epsilon(1e-12));
        CHECK(eta_gaussmix(x) < 0.5);
        CHECK(bayes_gaussmix(7)->predict(x) == 0);
        // closed form at the origin: e^{-7} / (1 + e^{-7})
        CHECK(eta_gaussmix(x) == doctest::Approx(std::exp(-7.0) / (1.0 + std::exp(-7.0))));
    }
    SUBCASE("the branch-A mean belongs to class one") {
        std::vector<double> x(7, 0.0);
        x[0] = 1.0;
        x[1] = 2.0;
        x[2] = 3.0;
        CHECK(eta_gaussmix(x) == doctest::Approx(direct_eta(x)).epsilon(1e-12));
        CHECK(eta_gaussmix(x) > 0.5);
        CHECK(bayes_gaussmix(7)->predict(x) == 1);
    }
    SUBCASE("random points agree with the direct form") {
        Rng rng(3);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> x(8);
            for (auto& c : x) c = rng.next_normal() * 2.0;
            CHECK(eta_gaussmix(x) == doctest::Approx(direct_eta(x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("eta ignores coordinates beyond the sixth") {
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(20);
        for (auto& c : x) c = rng.next_normal();
        std::vector<double> y(x);
        for (std::size_t j = 6; j < y.size(); ++j) y[j] += rng.next_normal() * 10.0;
        CHECK(eta_gaussmix(x) == eta_gaussmix(y));
    }
}

TEST_CASE("gaussmix bayes risk sits near its known level for low and high dimension") {
    const auto est7 = bayes_risk_gaussmix(7, 200000, 1);
    CHECK(std::abs(est7.value - 0.041) < 0.004);
    const auto est50 = bayes_risk_gaussmix(50, 200000, 2);
    CHECK(std::abs(est50.value - 0.041) < 0.004);

    SUBCASE("two independent seeds agree within four combined sigma") {
        const auto a = bayes_risk_gaussmix(7, 100000, 11);
        const auto b = bayes_risk_gaussmix(7, 100000, 12);
        const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
        CHECK(std::abs(a.value - b.value) < 4.0 * combined);
    }
}

TEST_CASE("no classifier beats the bayes classifier beyond noise") {
    const int test_n = 20000;

    SUBCASE("sigmoid") {
        const auto test = sample_sigmoid(test_n, 99);
        const auto bayes = bayes_sigmoid();
        const double bayes_risk = test_risk(*bayes, *test);
        const double sigma = std::sqrt(bayes_risk * (1.0 - bayes_risk) / test_n);

        const auto sample = sample_sigmoid(200, 98);
        const std::vector<ClassifierPtr> rivals{knn_train(5, sample), knn_train(19, sample)};
        for (const auto& rival : rivals)
            CHECK(test_risk(*rival, *test) >= bayes_risk - 4.0 * sigma);
    }
    SUBCASE("gaussmix") {
        const auto test = sample_gaussmix(test_n, 7, 97);
        const auto bayes = bayes_gaussmix(7);
        const double bayes_risk = test_risk(*bayes, *test);
        const double sigma = std::sqrt(bayes_risk * (1.0 - bayes_risk) / test_n);
        const auto sample = sample_gaussmix(200, 7, 96);
        CHECK(test_risk(*knn_train(9, sample), *test) >= bayes_risk - 4.0 * sigma);
    }
}

TEST_CASE("samplers are deterministic in the seed") {
    const auto a = sample_gaussmix(50, 8, 5);
    const auto b = sample_gaussmix(50, 8, 5);
    CHECK(a->features() == b->features());
    CHECK(a->labels() == b->labels());
    const auto c = sample_sigmoid(50, 5);
    const auto d = sample_sigmoid(50, 5);
    CHECK(c->features() == d->features());
    CHECK(c->labels() == d->labels());
    const auto e = sample_sigmoid(50, 6);
    CHECK(c->features() != e->features());
}

TEST_CASE("argument validation") {
    CHECK_THROWS(sample_gaussmix(10, 5, 0));  // d below six
    CHECK_THROWS(bayes_gaussmix(4));
    CHECK_THROWS(sample_sigmoid(0, 0));
    std::vector<double> x(5, 0.0);
    CHECK_THROWS(eta_gaussmix(x));
}
