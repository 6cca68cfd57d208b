#include "agghoo/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "agghoo/rng.hpp"

namespace agghoo {

namespace sigmoid_problem {

double g(double u, double v) {
    const double w = u * u + v;
    return std::exp(-w * w * w) + u * u + v * v;
}

double eta(double u, double v) {
    const double t = (g(u, v) - kOffset) / kScale;
    return 1.0 / (1.0 + std::exp(-t));
}

}  // namespace sigmoid_problem

namespace {

class SigmoidBayes : public Classifier {
public:
    Label predict(std::span<const double> x) const override {
        return sigmoid_problem::g(x[0], x[1]) >= sigmoid_problem::kOffset ? 1 : 0;
    }
};

}  // namespace

DataPtr sample_sigmoid(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_sigmoid: n must be >= 1");
    Rng rng = Rng::stream(seed, 0);
    std::vector<double> features;
    features.reserve(static_cast<std::size_t>(n) * 2);
    std::vector<Label> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        const double v = rng.next_unit();
        features.push_back(u);
        features.push_back(v);
        labels.push_back(rng.next_unit() < sigmoid_problem::eta(u, v) ? 1 : 0);
    }
    return std::make_shared<Dataset>(2, 2, std::move(features), std::move(labels));
}

ClassifierPtr bayes_sigmoid() { return std::make_shared<SigmoidBayes>(); }

double bayes_risk_sigmoid(int grid_size) {
    if (grid_size < 100) throw std::invalid_argument("bayes_risk_sigmoid: grid_size must be >= 100");
    int m = grid_size;
    if (m % 2 != 0) ++m;  // Simpson needs an even interval count
    const double h = 1.0 / m;

    auto weight = [m](int i) -> double {
        if (i == 0 || i == m) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    auto integrand = [](double u, double v) {
        const double e = sigmoid_problem::eta(u, v);
        return std::min(e, 1.0 - e);
    };

    double total = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double u = i * h;
        double row = 0.0;
        for (int j = 0; j <= m; ++j) row += weight(j) * integrand(u, j * h);
        total += weight(i) * row;
    }
    return total * h * h / 9.0;
}

namespace {

// Log-density exponents of the six informative coordinates; the remaining
// coordinates are standard normal under both classes and cancel in eta.
double log_sq(std::span<const double> x, int from, int to, int shift_base) {
    double s = 0.0;
    for (int j = from; j <= to; ++j) {
        const double centered = x[j - 1] - (shift_base + j - from);
        s += centered * centered;
    }
    return -0.5 * s;
}

double log_plain(std::span<const double> x, int from, int to) {
    double s = 0.0;
    for (int j = from; j <= to; ++j) s += x[j - 1] * x[j - 1];
    return -0.5 * s;
}

class GaussMixBayes : public Classifier {
public:
    Label predict(std::span<const double> x) const override {
        return eta_gaussmix(x) >= 0.5 ? 1 : 0;
    }
};

}  // namespace

double eta_gaussmix(std::span<const double> x) {
    if (x.size() < 6) throw std::invalid_argument("eta_gaussmix: need d >= 6");
    // Class 1, branch e=1: coordinates 1..3 shifted by (1,2,3).
    const double l1a = log_sq(x, 1, 3, 1) + log_plain(x, 4, 6);
    // Class 1, branch e=0: coordinates 4..6 shifted by (1,2,3).
    const double l1b = log_plain(x, 1, 3) + log_sq(x, 4, 6, 1);
    // Class 0: centered everywhere regardless of the branch.
    const double l0 = log_plain(x, 1, 6);

    const double top = std::max({l1a, l1b, l0});
    const double n1 = 0.7 * std::exp(l1a - top) + 0.3 * std::exp(l1b - top);
    const double n0 = std::exp(l0 - top);
    return n1 / (n1 + n0);
}

DataPtr sample_gaussmix(int n, int d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_gaussmix: n must be >= 1");
    if (d < 6) throw std::invalid_argument("sample_gaussmix: d must be >= 6");
    Rng rng = Rng::stream(seed, 0);
    std::vector<double> features;
    features.reserve(static_cast<std::size_t>(n) * d);
    std::vector<Label> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int y = rng.next_unit() < 0.5 ? 1 : 0;
        const bool branch_a = rng.next_unit() < 0.7;
        for (int j = 1; j <= d; ++j) {
            double mean = 0.0;
            if (branch_a && j >= 1 && j <= 3) mean = j * y;
            if (!branch_a && j >= 4 && j <= 6) mean = (j - 3) * y;
            features.push_back(mean + rng.next_normal());
        }
        labels.push_back(y);
    }
    return std::make_shared<Dataset>(d, 2, std::move(features), std::move(labels));
}

ClassifierPtr bayes_gaussmix(int d) {
    if (d < 6) throw std::invalid_argument("bayes_gaussmix: d must be >= 6");
    return std::make_shared<GaussMixBayes>();
}

MonteCarloEstimate bayes_risk_gaussmix(int d, long mc_n, std::uint64_t seed) {
    if (d < 6) throw std::invalid_argument("bayes_risk_gaussmix: d must be >= 6");
    if (mc_n < 2) throw std::invalid_argument("bayes_risk_gaussmix: mc_n must be >= 2");
    Rng rng = Rng::stream(seed, 0);
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> x(d);
    for (long i = 0; i < mc_n; ++i) {
        const int y = rng.next_unit() < 0.5 ? 1 : 0;
        const bool branch_a = rng.next_unit() < 0.7;
        // Only the first six coordinates enter eta; the others are sampled
        // anyway so the estimate is a faithful draw from the full marginal.
        for (int j = 1; j <= d; ++j) {
            double mean = 0.0;
            if (branch_a && j >= 1 && j <= 3) mean = j * y;
            if (!branch_a && j >= 4 && j <= 6) mean = (j - 3) * y;
            x[j - 1] = mean + rng.next_normal();
        }
        const double e = eta_gaussmix(x);
        const double v = std::min(e, 1.0 - e);
        sum += v;
        sumsq += v * v;
    }
    MonteCarloEstimate est;
    est.draws = mc_n;
    est.value = sum / mc_n;
    const double var = (sumsq - sum * sum / mc_n) / (mc_n - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / mc_n);
    return est;
}

}  // namespace agghoo
