#include "agghoo/selection.hpp"

#include <cmath>
#include <stdexcept>

#include "agghoo/rng.hpp"

namespace agghoo {

MajorityVoteClassifier::MajorityVoteClassifier(std::vector<ClassifierPtr> members, int class_count)
    : members_(std::move(members)), class_count_(class_count) {
    if (members_.empty()) throw std::invalid_argument("MajorityVoteClassifier: no members");
    if (class_count_ < 2) throw std::invalid_argument("MajorityVoteClassifier: class_count < 2");
    for (const auto& m : members_)
        if (!m) throw std::invalid_argument("MajorityVoteClassifier: null member");
}

Label MajorityVoteClassifier::predict(std::span<const double> x) const {
    return majority_vote(members_, class_count_, x);
}

Label majority_vote(const std::vector<ClassifierPtr>& members, int class_count,
                    std::span<const double> x) {
    if (members.empty()) throw std::invalid_argument("majority_vote: no members");
    std::vector<int> counts(class_count, 0);
    for (const auto& m : members) {
        const Label y = m->predict(x);
        if (y < 0 || y >= class_count) throw std::runtime_error("majority_vote: member label out of range");
        ++counts[y];
    }
    Label best = 0;
    for (Label y = 1; y < class_count; ++y)
        if (counts[y] > counts[best]) best = y;  // strict: ties keep the smaller label
    return best;
}

double holdout_risk(const LearningRule& rule, const Dataset& data, const IndexSet& train) {
    if (train.size() >= data.size()) throw std::invalid_argument("holdout_risk: empty validation set");
    const IndexSet validation = train.complement(data.size());
    const ClassifierPtr f = rule.train(subset(data, train));
    return empirical_risk(*f, data, validation);
}

namespace {

// Scores the whole family on one training set; the subsample is
// materialized once and shared by every rule.
HoldoutChoice select_on_split(const std::vector<LearningRule>& family, const Dataset& data,
                              const IndexSet& train, int split_id, const TraceSink& trace,
                              std::vector<double>* scores_out) {
    if (family.empty()) throw std::invalid_argument("holdout_select: empty family");
    if (train.size() >= data.size())
        throw std::invalid_argument("holdout_select: empty validation set");
    const IndexSet validation = train.complement(data.size());
    const DataPtr train_data = subset(data, train);

    HoldoutChoice best;
    SplitScores record;
    record.split = split_id;
    for (std::size_t g = 0; g < family.size(); ++g) {
        const ClassifierPtr f = family[g].train(train_data);
        const double score = empirical_risk(*f, data, validation);
        if (scores_out) scores_out->push_back(score);
        if (trace) record.scores.emplace_back(family[g].id, score);
        const bool better = !best.classifier || score < best.score ||
                            (score == best.score && family[g].id < family[best.rule_index].id);
        if (better) {
            best.rule_index = g;
            best.classifier = f;
            best.score = score;
        }
    }
    if (trace) {
        record.winner_id = family[best.rule_index].id;
        trace(record);
    }
    return best;
}

}  // namespace

HoldoutChoice holdout_select(const std::vector<LearningRule>& family, const Dataset& data,
                             const IndexSet& train, const TraceSink& trace) {
    return select_on_split(family, data, train, 0, trace, nullptr);
}

PlanEvaluation evaluate_plan(const std::vector<LearningRule>& family, const Dataset& data,
                             const SplitPlan& plan, const TraceSink& trace) {
    if (family.empty()) throw std::invalid_argument("evaluate_plan: empty family");
    if (plan.sets.empty()) throw std::invalid_argument("evaluate_plan: empty plan");
    PlanEvaluation eval;
    eval.scores.reserve(plan.sets.size());
    for (int j = 0; j < plan.V(); ++j) {
        std::vector<double> row;
        row.reserve(family.size());
        HoldoutChoice choice = select_on_split(family, data, plan.sets[j], j, trace, &row);
        eval.scores.push_back(std::move(row));
        eval.winner_index.push_back(choice.rule_index);
        eval.winners.push_back(std::move(choice.classifier));
    }
    return eval;
}

CvChoice cv_from_evaluation(const std::vector<LearningRule>& family, const Dataset& data,
                            const PlanEvaluation& eval) {
    const std::size_t V = eval.scores.size();
    CvChoice choice;
    choice.cv_scores.assign(family.size(), 0.0);
    for (std::size_t j = 0; j < V; ++j)
        for (std::size_t g = 0; g < family.size(); ++g) choice.cv_scores[g] += eval.scores[j][g];
    for (auto& s : choice.cv_scores) s /= static_cast<double>(V);

    std::size_t best = 0;
    for (std::size_t g = 1; g < family.size(); ++g) {
        if (choice.cv_scores[g] < choice.cv_scores[best] ||
            (choice.cv_scores[g] == choice.cv_scores[best] && family[g].id < family[best].id))
            best = g;
    }
    choice.rule_index = best;
    choice.classifier = family[best].train(subset(data, IndexSet::all(data.size())));
    return choice;
}

CvChoice cv_select(const std::vector<LearningRule>& family, const Dataset& data,
                   const SplitPlan& plan, const TraceSink& trace) {
    return cv_from_evaluation(family, data, evaluate_plan(family, data, plan, trace));
}

std::shared_ptr<const MajorityVoteClassifier> agghoo_from_evaluation(const PlanEvaluation& eval,
                                                                     int class_count) {
    return std::make_shared<MajorityVoteClassifier>(eval.winners, class_count);
}

std::shared_ptr<const MajorityVoteClassifier> agghoo(const std::vector<LearningRule>& family,
                                                     const Dataset& data, const SplitPlan& plan,
                                                     const TraceSink& trace) {
    return agghoo_from_evaluation(evaluate_plan(family, data, plan, trace), data.class_count());
}

std::shared_ptr<const MajorityVoteClassifier> subagged_holdout(
    const std::vector<LearningRule>& family, const Dataset& data, const SplitPlan& plan,
    double inner_tau, std::uint64_t seed, const TraceSink& trace,
    std::vector<std::size_t>* winner_indices) {
    if (family.empty()) throw std::invalid_argument("subagged_holdout: empty family");
    if (plan.sets.empty()) throw std::invalid_argument("subagged_holdout: empty plan");

    std::vector<ClassifierPtr> members;
    members.reserve(plan.sets.size());
    if (winner_indices) winner_indices->clear();
    for (int j = 0; j < plan.V(); ++j) {
        const DataPtr sub = subset(data, plan.sets[j]);
        const int m = sub->size();
        const int inner_train = static_cast<int>(std::floor(inner_tau * m));
        if (inner_train < 1 || inner_train > m - 1)
            throw std::invalid_argument("subagged_holdout: degenerate inner split");
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(j));
        const IndexSet inner = IndexSet::of(rng.sample_without_replacement(m, inner_train));
        // Winner stays trained on the inner portion of the subsample; it is
        // never retrained on all of T_j.
        HoldoutChoice choice = select_on_split(family, *sub, inner, j, trace, nullptr);
        if (winner_indices) winner_indices->push_back(choice.rule_index);
        members.push_back(std::move(choice.classifier));
    }
    return std::make_shared<MajorityVoteClassifier>(std::move(members), data.class_count());
}

}  // namespace agghoo
