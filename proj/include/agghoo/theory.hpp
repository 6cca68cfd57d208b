#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agghoo/core.hpp"
#include "agghoo/rng.hpp"

namespace agghoo {

// A fully specified distribution on a finite feature set: point i has mass
// weights[i] and conditional class probabilities eta[i][y]. Risks and
// excess risks are exact weighted sums. Point i is presented to
// classifiers as the one-dimensional feature vector {i}.
struct FiniteProblem {
    std::vector<double> weights;            // sums to 1
    std::vector<std::vector<double>> eta;   // [point][label], rows sum to 1
    int class_count = 2;

    int support_size() const { return static_cast<int>(weights.size()); }

    // Dyadic random instance (all weights and probabilities are multiples
    // of 1/64), so every risk below evaluates without rounding error.
    static FiniteProblem random_dyadic(Rng& rng, int max_points, int max_classes);
};

// Classifier defined by a label table over the finite support.
ClassifierPtr table_classifier(std::vector<Label> labels);

// Pointwise argmax of eta, ties to the smallest label.
std::vector<Label> bayes_labels(const FiniteProblem& problem);

double exact_risk(const Classifier& f, const FiniteProblem& problem);
double exact_excess(const Classifier& f, const FiniteProblem& problem);

// Both majority-vote bounds, evaluated exactly: excess(mv) <= (M/V) * sum
// of voter excesses, and risk(mv) <= (2/V) * sum of voter risks. The
// comparisons are carried out on the scaled forms V*lhs vs M*sum (resp.
// 2*sum), which are exact for dyadic problems.
struct MajorityBoundsCheck {
    double lhs_excess = 0.0;
    double rhs_excess = 0.0;
    double lhs_risk = 0.0;
    double rhs_risk = 0.0;
    bool both_hold = false;
};

MajorityBoundsCheck check_majority_bounds(const FiniteProblem& problem,
                                          const std::vector<ClassifierPtr>& voters);

struct Prop2SweepResult {
    int instances = 0;
    int violations = 0;
};

// Randomized sweep of check_majority_bounds over dyadic instances. Any
// violation is a bug in the vote or in the risk evaluation.
Prop2SweepResult prop2_fuzz(int sweeps, std::uint64_t seed);

// Aggregation oracle inequality, checked in Monte-Carlo form:
//   mean excess(agghoo) <= 3 * mean oracle excess
//                          + 29 c^{1/(b+2)} log(e|G|) / p^{(b+1)/(b+2)},
// where the oracle is the best rule trained on n-p rows. beta and c are
// properties of the distribution supplied by the caller, never fitted.
struct OracleBoundParams {
    std::size_t family_size = 0;
    int p = 0;        // validation size n - |T_1|
    double beta = 0.0;
    double c = 1.0;
};

struct OracleBoundReport {
    double lhs_mean = 0.0;
    double lhs_se = 0.0;
    double oracle_mean = 0.0;
    double oracle_se = 0.0;
    double remainder = 0.0;
    double rhs = 0.0;
    double combined_se = 0.0;
    bool holds = false;  // lhs_mean <= rhs + 4 * combined_se

    std::string to_json() const;
};

OracleBoundReport check_oracle_inequality(std::span<const double> agghoo_excess,
                                          std::span<const double> oracle_excess,
                                          const OracleBoundParams& params);

}  // namespace agghoo
