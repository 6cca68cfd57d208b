#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace agghoo {

// Class labels are dense integers 0..class_count-1. The class count is
// declared by the dataset, never inferred from the labels present, so that
// subsamples missing a class keep the vote arity of the full problem.
using Label = int;

class Dataset {
public:
    Dataset(int dim, int class_count, std::vector<double> features, std::vector<Label> labels);

    int dim() const { return dim_; }
    int class_count() const { return class_count_; }
    int size() const { return static_cast<int>(labels_.size()); }

    std::span<const double> row(int i) const {
        return {features_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }
    Label label(int i) const { return labels_[i]; }

    const std::vector<double>& features() const { return features_; }
    const std::vector<Label>& labels() const { return labels_; }

    // Content fingerprint (FNV-1a over dims, features and labels). Used by
    // learners that cache per-dataset work shared across a rule family.
    std::uint64_t content_hash() const;

private:
    int dim_;
    int class_count_;
    std::vector<double> features_;  // row-major, size() * dim()
    std::vector<Label> labels_;
};

using DataPtr = std::shared_ptr<const Dataset>;

// Sorted, duplicate-free subset of {0,...,n-1}.
class IndexSet {
public:
    IndexSet() = default;
    static IndexSet of(std::vector<int> indices);  // sorts, rejects duplicates/negatives
    static IndexSet all(int n);

    const std::vector<int>& indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool valid_for(int n) const { return indices_.empty() || indices_.back() < n; }
    bool contains(int i) const;

    IndexSet complement(int n) const;

private:
    std::vector<int> indices_;
};

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual Label predict(std::span<const double> x) const = 0;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

// A named map from datasets to classifiers. Training must be deterministic;
// any internal randomness has to be fixed by the rule's own construction
// parameters. Rule ids are unique within a family and their lexicographic
// order breaks every argmin tie downstream.
struct LearningRule {
    std::string id;
    std::function<ClassifierPtr(const DataPtr&)> train;
};

// Materializes the subsample indexed by rows.
DataPtr subset(const Dataset& data, const IndexSet& rows);

// Fraction of rows of b misclassified by f. Exact: integer error count
// divided once at the end.
double empirical_risk(const Classifier& f, const Dataset& data, const IndexSet& b);

// Misclassification fraction over an entire held-out set.
double test_risk(const Classifier& f, const Dataset& test);

// test_risk(f) - test_risk(reference); may be slightly negative under
// sampling noise and is deliberately not clamped.
double excess_risk_estimate(const Classifier& f, const Classifier& reference, const Dataset& test);

}  // namespace agghoo
