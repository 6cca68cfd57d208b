#include "agghoo/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "agghoo/selection.hpp"

namespace agghoo {

namespace {

class TableClassifier : public Classifier {
public:
    explicit TableClassifier(std::vector<Label> labels) : labels_(std::move(labels)) {
        if (labels_.empty()) throw std::invalid_argument("table_classifier: empty table");
    }

    Label predict(std::span<const double> x) const override {
        const int i = static_cast<int>(std::lround(x[0]));
        if (i < 0 || i >= static_cast<int>(labels_.size()))
            throw std::out_of_range("table_classifier: point outside support");
        return labels_[i];
    }

private:
    std::vector<Label> labels_;
};

// Splits `total` into `parts` non-negative integers, each part at least
// `minimum`, uniformly at random in composition space.
std::vector<int> random_composition(Rng& rng, int total, int parts, int minimum) {
    std::vector<int> out(parts, minimum);
    int rest = total - minimum * parts;
    for (int i = 0; i < parts - 1; ++i) {
        const int take = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(rest) + 1));
        out[i] += take;
        rest -= take;
    }
    out[parts - 1] += rest;
    return out;
}

}  // namespace

FiniteProblem FiniteProblem::random_dyadic(Rng& rng, int max_points, int max_classes) {
    FiniteProblem problem;
    const int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_points)));
    problem.class_count = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_classes - 1)));
    const auto w = random_composition(rng, 64, m, 1);
    problem.weights.resize(m);
    for (int i = 0; i < m; ++i) problem.weights[i] = w[i] / 64.0;
    problem.eta.resize(m);
    for (int i = 0; i < m; ++i) {
        const auto e = random_composition(rng, 64, problem.class_count, 0);
        problem.eta[i].resize(problem.class_count);
        for (int y = 0; y < problem.class_count; ++y) problem.eta[i][y] = e[y] / 64.0;
    }
    return problem;
}

ClassifierPtr table_classifier(std::vector<Label> labels) {
    return std::make_shared<TableClassifier>(std::move(labels));
}

std::vector<Label> bayes_labels(const FiniteProblem& problem) {
    std::vector<Label> out(problem.support_size());
    for (int i = 0; i < problem.support_size(); ++i) {
        Label best = 0;
        for (Label y = 1; y < problem.class_count; ++y)
            if (problem.eta[i][y] > problem.eta[i][best]) best = y;
        out[i] = best;
    }
    return out;
}

double exact_risk(const Classifier& f, const FiniteProblem& problem) {
    double risk = 0.0;
    for (int i = 0; i < problem.support_size(); ++i) {
        const double xi = i;
        const Label y = f.predict(std::span<const double>(&xi, 1));
        if (y < 0 || y >= problem.class_count)
            throw std::out_of_range("exact_risk: label outside problem classes");
        risk += problem.weights[i] * (1.0 - problem.eta[i][y]);
    }
    return risk;
}

double exact_excess(const Classifier& f, const FiniteProblem& problem) {
    const auto bayes = bayes_labels(problem);
    double excess = 0.0;
    for (int i = 0; i < problem.support_size(); ++i) {
        const double xi = i;
        const Label y = f.predict(std::span<const double>(&xi, 1));
        if (y < 0 || y >= problem.class_count)
            throw std::out_of_range("exact_excess: label outside problem classes");
        excess += problem.weights[i] * (problem.eta[i][bayes[i]] - problem.eta[i][y]);
    }
    return excess;
}

MajorityBoundsCheck check_majority_bounds(const FiniteProblem& problem,
                                          const std::vector<ClassifierPtr>& voters) {
    if (voters.empty()) throw std::invalid_argument("check_majority_bounds: no voters");
    const MajorityVoteClassifier mv(voters, problem.class_count);
    const double V = static_cast<double>(voters.size());
    const double M = static_cast<double>(problem.class_count);

    MajorityBoundsCheck check;
    check.lhs_excess = exact_excess(mv, problem);
    check.lhs_risk = exact_risk(mv, problem);
    double sum_excess = 0.0, sum_risk = 0.0;
    for (const auto& voter : voters) {
        sum_excess += exact_excess(*voter, problem);
        sum_risk += exact_risk(*voter, problem);
    }
    check.rhs_excess = M / V * sum_excess;
    check.rhs_risk = 2.0 / V * sum_risk;
    // Scaled comparisons: dyadic sums stay exact, and integer multiples of
    // exact dyadics are exact as well.
    check.both_hold = (V * check.lhs_excess <= M * sum_excess) &&
                      (V * check.lhs_risk <= 2.0 * sum_risk);
    return check;
}

Prop2SweepResult prop2_fuzz(int sweeps, std::uint64_t seed) {
    if (sweeps < 1) throw std::invalid_argument("prop2_fuzz: sweeps must be >= 1");
    Prop2SweepResult result;
    for (int s = 0; s < sweeps; ++s) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s));
        const FiniteProblem problem = FiniteProblem::random_dyadic(rng, 6, 4);
        const int V = 1 + static_cast<int>(rng.next_below(7));
        std::vector<ClassifierPtr> voters;
        voters.reserve(V);
        for (int i = 0; i < V; ++i) {
            std::vector<Label> labels(problem.support_size());
            for (auto& y : labels)
                y = static_cast<Label>(rng.next_below(static_cast<std::uint64_t>(problem.class_count)));
            voters.push_back(table_classifier(std::move(labels)));
        }
        ++result.instances;
        if (!check_majority_bounds(problem, voters).both_hold) ++result.violations;
    }
    return result;
}

std::string OracleBoundReport::to_json() const {
    nlohmann::json j;
    j["lhs_mean"] = lhs_mean;
    j["lhs_se"] = lhs_se;
    j["oracle_mean"] = oracle_mean;
    j["oracle_se"] = oracle_se;
    j["remainder"] = remainder;
    j["rhs"] = rhs;
    j["combined_se"] = combined_se;
    j["holds"] = holds;
    return j.dump();
}

namespace {

std::pair<double, double> mean_and_se(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace

OracleBoundReport check_oracle_inequality(std::span<const double> agghoo_excess,
                                          std::span<const double> oracle_excess,
                                          const OracleBoundParams& params) {
    if (agghoo_excess.empty() || oracle_excess.empty())
        throw std::invalid_argument("check_oracle_inequality: empty samples");
    if (params.family_size < 1 || params.p < 1 || params.beta < 0.0 || params.c < 1.0)
        throw std::invalid_argument("check_oracle_inequality: bad parameters");

    OracleBoundReport report;
    std::tie(report.lhs_mean, report.lhs_se) = mean_and_se(agghoo_excess);
    std::tie(report.oracle_mean, report.oracle_se) = mean_and_se(oracle_excess);
    const double exponent = (params.beta + 1.0) / (params.beta + 2.0);
    report.remainder = 29.0 * std::pow(params.c, 1.0 / (params.beta + 2.0)) *
                       std::log(std::exp(1.0) * static_cast<double>(params.family_size)) /
                       std::pow(static_cast<double>(params.p), exponent);
    report.rhs = 3.0 * report.oracle_mean + report.remainder;
    report.combined_se = std::sqrt(report.lhs_se * report.lhs_se +
                                   9.0 * report.oracle_se * report.oracle_se);
    report.holds = report.lhs_mean <= report.rhs + 4.0 * report.combined_se;
    return report;
}

}  // namespace agghoo
