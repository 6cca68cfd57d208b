#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agghoo/core.hpp"

namespace agghoo {

// Binary tree of axis-aligned threshold splits. Rows with
// x[feature] <= threshold descend left. Leaves carry the majority label of
// the training rows that reached them; every node keeps its row count and
// the error count it would incur as a leaf.
struct CartNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Label label = 0;          // majority label of rows at this node
    int n_rows = 0;
    int errors_as_leaf = 0;   // n_rows minus the majority class count
};

class CartTree {
public:
    explicit CartTree(std::vector<CartNode> nodes);

    Label predict(std::span<const double> x) const;

    const std::vector<CartNode>& nodes() const { return nodes_; }
    int leaf_count() const { return leaf_count_; }
    // Misclassified training rows summed over leaves.
    int training_errors() const { return training_errors_; }

    std::string to_json() const;

private:
    std::vector<CartNode> nodes_;  // root at index 0, children after parents
    int leaf_count_ = 0;
    int training_errors_ = 0;
};

// Greedy growth by Gini impurity: while a node is impure and some feature
// still separates its rows, apply the split with the largest impurity
// reduction (thresholds at midpoints of consecutive distinct values; ties
// by lowest feature then lowest threshold). Split comparisons are done in
// exact integer arithmetic on class counts.
CartTree cart_grow(const Dataset& data);

// One subtree per penalty interval. For alpha in
// [breakpoint[i], breakpoint[i+1]) the i-th subtree minimizes
// training_errors/n + alpha * leaf_count over all rooted subtrees, ties
// resolved toward the smaller subtree. Breakpoints are exact rationals
// alpha_num / alpha_den recorded alongside their double rendering.
struct PruneEntry {
    double alpha = 0.0;
    std::int64_t alpha_num = 0;
    std::int64_t alpha_den = 1;
    CartTree tree;
};

class PrunePath {
public:
    explicit PrunePath(std::vector<PruneEntry> entries);

    const std::vector<PruneEntry>& entries() const { return entries_; }
    const CartTree& select(double alpha) const;

private:
    std::vector<PruneEntry> entries_;
};

// Weakest-link cost-complexity pruning of a tree grown on `data`.
PrunePath cart_prune_path(const CartTree& tree, const Dataset& data);

// Rule training = grow, prune, pick the subtree for this alpha.
LearningRule cart_rule(double alpha);

// Fixed data-independent geometric penalty grid, so the rule family is the
// same on every split.
struct CartGrid {
    double alpha_min = 1e-4;
    double ratio = 1.5;
    int count = 40;
};

// One rule per grid point. The rules share a per-dataset cache of grown
// prune paths, so scoring the whole family on a split costs one growth.
std::vector<LearningRule> cart_family(const CartGrid& grid = {});

}  // namespace agghoo
