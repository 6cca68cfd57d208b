#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "agghoo/core.hpp"
#include "agghoo/splits.hpp"

namespace agghoo {

// Outcome of hold-out selection on one training set: the winning rule, its
// classifier trained on the training subsample only, and the validation
// risk it achieved.
struct HoldoutChoice {
    std::size_t rule_index = 0;
    ClassifierPtr classifier;
    double score = 0.0;
};

// Majority vote over a fixed set of trained classifiers. Vote ties go to
// the smallest label value.
class MajorityVoteClassifier : public Classifier {
public:
    MajorityVoteClassifier(std::vector<ClassifierPtr> members, int class_count);

    Label predict(std::span<const double> x) const override;

    const std::vector<ClassifierPtr>& members() const { return members_; }
    int class_count() const { return class_count_; }

private:
    std::vector<ClassifierPtr> members_;
    int class_count_;
};

// Label with the maximal vote count among members, ties to smallest label.
Label majority_vote(const std::vector<ClassifierPtr>& members, int class_count,
                    std::span<const double> x);

// Per-split record of the scored family, for trace output and debugging.
struct SplitScores {
    int split = 0;
    std::vector<std::pair<std::string, double>> scores;  // (rule id, hold-out risk)
    std::string winner_id;
};
using TraceSink = std::function<void(const SplitScores&)>;

// Risk of `rule` trained on the subsample indexed by `train` and evaluated
// on its complement.
double holdout_risk(const LearningRule& rule, const Dataset& data, const IndexSet& train);

// Argmin of holdout_risk over the family; score ties broken by smallest
// rule id. The winner stays trained on the training subsample.
HoldoutChoice holdout_select(const std::vector<LearningRule>& family, const Dataset& data,
                             const IndexSet& train, const TraceSink& trace = nullptr);

// All hold-out work for one plan: the V x |family| score matrix and the
// per-split winners. agghoo / cv_select on the same (family, plan) both
// derive from one evaluation, so together they cost exactly V * |family|
// trainings.
struct PlanEvaluation {
    std::vector<std::vector<double>> scores;  // [split][rule]
    std::vector<std::size_t> winner_index;    // per split
    std::vector<ClassifierPtr> winners;       // per split, trained on its own subsample
};

PlanEvaluation evaluate_plan(const std::vector<LearningRule>& family, const Dataset& data,
                             const SplitPlan& plan, const TraceSink& trace = nullptr);

// Cross-validation: rules scored by the mean of their V hold-out risks, the
// winner retrained on the full dataset.
struct CvChoice {
    std::size_t rule_index = 0;
    ClassifierPtr classifier;                // trained on all rows
    std::vector<double> cv_scores;           // per rule
};

CvChoice cv_select(const std::vector<LearningRule>& family, const Dataset& data,
                   const SplitPlan& plan, const TraceSink& trace = nullptr);
CvChoice cv_from_evaluation(const std::vector<LearningRule>& family, const Dataset& data,
                            const PlanEvaluation& eval);

// Aggregated hold-out: majority vote over the V per-split hold-out winners,
// each trained on its own training subsample.
std::shared_ptr<const MajorityVoteClassifier> agghoo(const std::vector<LearningRule>& family,
                                                     const Dataset& data, const SplitPlan& plan,
                                                     const TraceSink& trace = nullptr);
std::shared_ptr<const MajorityVoteClassifier> agghoo_from_evaluation(const PlanEvaluation& eval,
                                                                     int class_count);

// Subagging applied to hold-out selection: each subsample D^{T_j} is itself
// split by an inner training set of size floor(inner_tau * |T_j|); the
// winner within the subsample stays trained on that inner portion.
// winner_indices, when given, receives the selected rule index per split.
std::shared_ptr<const MajorityVoteClassifier> subagged_holdout(
    const std::vector<LearningRule>& family, const Dataset& data, const SplitPlan& plan,
    double inner_tau, std::uint64_t seed, const TraceSink& trace = nullptr,
    std::vector<std::size_t>* winner_indices = nullptr);

}  // namespace agghoo
