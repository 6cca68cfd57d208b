#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "agghoo/localpoly.hpp"
#include "agghoo/rng.hpp"

#include "helpers.hpp"

using namespace agghoo;
using namespace testutil;

namespace {

// Closed-form Nadaraya-Watson value with the same Gaussian kernel; the
// normalization cancels in the ratio so it is omitted.
double nadaraya_watson(const Dataset& data, std::span<const double> x, double h) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < data.size(); ++i) {
        const auto r = data.row(i);
        double sq = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double u = (r[c] - x[c]) / h;
            sq += u * u;
        }
        const double w = std::exp(-0.5 * sq);
        num += w * data.label(i);
        den += w;
    }
    return num / den;
}

DataPtr rand_dataset(Rng& rng, int n, int d) {
    std::vector<double> features;
    std::vector<Label> labels;
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < d; ++c) features.push_back(rng.next_unit());
        labels.push_back(static_cast<Label>(rng.next_below(2)));
    }
    return std::make_shared<Dataset>(d, 2, std::move(features), std::move(labels));
}

}  // namespace

TEST_CASE("degree zero reproduces the Nadaraya-Watson estimate") {
    Rng rng(17);
    int checked = 0;
    while (checked < 100) {
        const int d = 1 + static_cast<int>(rng.next_below(2));
        const auto data = rand_dataset(rng, 20 + static_cast<int>(rng.next_below(30)), d);
        std::vector<double> x(d);
        for (auto& c : x) c = rng.next_unit();
        const double h = 0.2 + 0.8 * rng.next_unit();
        const double eta = localpoly_eta(0, h, *data, x);
        if (eta == 0.0) continue;  // guard ruled the point out; not this case
        const double oracle = nadaraya_watson(*data, x, h);
        CHECK(std::abs(eta - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
        CHECK(eta >= 0.0);
        CHECK(eta <= 1.0);
        ++checked;
    }
}

TEST_CASE("constant labels are reproduced exactly for any degree") {
    // Bandwidth well below the data spread with many points inside it, so
    // the design-matrix guard passes for degrees up to two.
    Rng rng(23);
    std::vector<double> features;
    std::vector<Label> labels;
    for (int i = 0; i < 500; ++i) {
        features.push_back(rng.next_unit());
        labels.push_back(1);
    }
    const auto data = std::make_shared<Dataset>(1, 2, std::move(features), std::move(labels));
    const double x = 0.5;
    for (const int degree : {0, 1, 2}) {
        const double eta = localpoly_eta(degree, 0.1, *data, std::span<const double>(&x, 1));
        CHECK(eta == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("far-away query points fall back to zero through the guard") {
    Rng rng(29);
    const auto data = rand_dataset(rng, 50, 2);
    const double x[2] = {1e6, 1e6};
    CHECK(localpoly_eta(0, 0.1, *data, x) == 0.0);
    CHECK(localpoly_eta(2, 0.1, *data, x) == 0.0);
    // the plug-in classifier then predicts label 0
    const auto f = localpoly_train(1, 0.1, data);
    CHECK(f->predict(x) == 0);
}

TEST_CASE("a wide bandwidth approaches the global label mean") {
    // sixty percent ones; h well above the data spread flattens the weights,
    // but h must stay below ~0.4*log(n) or the design-matrix guard trips
    // (its smallest eigenvalue scales like 1/h in one dimension).
    std::vector<double> features;
    std::vector<Label> labels;
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        features.push_back(rng.next_unit());
        labels.push_back(i < 30 ? 1 : 0);
    }
    const auto data = std::make_shared<Dataset>(1, 2, std::move(features), std::move(labels));
    const double x = 0.5;
    const double h = 1.5;
    const double eta = localpoly_eta(0, h, *data, std::span<const double>(&x, 1));
    CHECK(eta != 0.0);  // guard must pass at this bandwidth
    CHECK(eta == doctest::Approx(nadaraya_watson(*data, std::span<const double>(&x, 1), h))
                     .epsilon(1e-10));
    CHECK(eta == doctest::Approx(0.6).epsilon(0.08));
    CHECK(localpoly_train(0, h, data)->predict(std::span<const double>(&x, 1)) == 1);
}

TEST_CASE("the collection enumerates the degree-bandwidth grid") {
    const auto family = lp_collection(3, 20);
    REQUIRE(family.size() == 60);
    std::set<std::string> ids;
    for (const auto& rule : family) ids.insert(rule.id);
    CHECK(ids.size() == 60);
    CHECK_THROWS(lp_collection(0, 5));
}

TEST_CASE("binary-only and argument validation") {
    const auto data3 = indexed_dataset({0, 1, 2}, 3);
    const double x = 0.0;
    CHECK_THROWS(localpoly_eta(0, 1.0, *data3, std::span<const double>(&x, 1)));
    const auto data = indexed_dataset({0, 1, 1, 0});
    CHECK_THROWS(localpoly_eta(-1, 1.0, *data, std::span<const double>(&x, 1)));
    CHECK_THROWS(localpoly_eta(0, 0.0, *data, std::span<const double>(&x, 1)));
}
