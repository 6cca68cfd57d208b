#include "agghoo/cart.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace agghoo {

namespace {

Label majority_label(const std::vector<int>& counts) {
    Label best = 0;
    for (Label y = 1; y < static_cast<Label>(counts.size()); ++y)
        if (counts[y] > counts[best]) best = y;
    return best;
}

struct Grower {
    const Dataset& data;
    std::vector<CartNode> nodes;

    explicit Grower(const Dataset& d) : data(d) {}

    int grow(std::vector<int>& rows) {
        const int m = static_cast<int>(rows.size());
        std::vector<int> counts(data.class_count(), 0);
        for (const int i : rows) ++counts[data.label(i)];
        const Label label = majority_label(counts);

        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].label = label;
        nodes[node_id].n_rows = m;
        nodes[node_id].errors_as_leaf = m - counts[label];

        const bool impure = counts[label] < m;
        if (!impure || m < 2) return node_id;

        // Best split by Gini reduction, compared exactly: maximizing the
        // reduction is maximizing S = sum_y cL_y^2 / nL + sum_y cR_y^2 / nR,
        // an integer rational. Ties keep the first candidate (lowest
        // feature, then lowest threshold).
        bool found = false;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::int64_t best_num = 0, best_den = 1;  // S as num/den, den = nL*nR

        std::vector<int> order(rows);
        std::vector<int> left_counts(data.class_count());
        for (int f = 0; f < data.dim(); ++f) {
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const double va = data.row(a)[f], vb = data.row(b)[f];
                return va < vb || (va == vb && a < b);
            });
            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::int64_t sumsq_left = 0;
            std::int64_t sumsq_right = 0;
            for (const int c : counts) sumsq_right += static_cast<std::int64_t>(c) * c;

            for (int pos = 0; pos + 1 < m; ++pos) {
                const int i = order[pos];
                const Label y = data.label(i);
                sumsq_left += 2 * static_cast<std::int64_t>(left_counts[y]) + 1;
                sumsq_right -= 2 * static_cast<std::int64_t>(counts[y] - left_counts[y]) - 1;
                ++left_counts[y];

                const double v = data.row(i)[f];
                const double v_next = data.row(order[pos + 1])[f];
                if (v == v_next) continue;

                const std::int64_t nl = pos + 1, nr = m - nl;
                const std::int64_t num = sumsq_left * nr + sumsq_right * nl;
                const std::int64_t den = nl * nr;
                if (!found || num * best_den > best_num * den) {
                    found = true;
                    best_feature = f;
                    // midpoint, except when v and v_next are adjacent doubles
                    // and the midpoint would round up onto v_next
                    double threshold = v + (v_next - v) / 2;
                    if (!(threshold < v_next)) threshold = v;
                    best_threshold = threshold;
                    best_num = num;
                    best_den = den;
                }
            }
        }
        if (!found) return node_id;  // impure but indistinguishable rows

        std::vector<int> left_rows, right_rows;
        for (const int i : rows)
            (data.row(i)[best_feature] <= best_threshold ? left_rows : right_rows).push_back(i);

        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        const int left_id = grow(left_rows);
        nodes[node_id].left = left_id;
        const int right_id = grow(right_rows);
        nodes[node_id].right = right_id;
        return node_id;
    }
};

}  // namespace

CartTree::CartTree(std::vector<CartNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("CartTree: empty node list");
    for (const auto& nd : nodes_) {
        if (nd.feature < 0) {
            ++leaf_count_;
            training_errors_ += nd.errors_as_leaf;
        } else if (nd.left < 0 || nd.right < 0) {
            throw std::invalid_argument("CartTree: internal node missing a child");
        }
    }
}

Label CartTree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes_[node].feature >= 0)
        node = x[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                 : nodes_[node].right;
    return nodes_[node].label;
}

std::string CartTree::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& nd : nodes_) {
        nlohmann::json j;
        if (nd.feature >= 0) {
            j["feature"] = nd.feature;
            j["threshold"] = nd.threshold;
            j["left"] = nd.left;
            j["right"] = nd.right;
        }
        j["label"] = nd.label;
        j["n_rows"] = nd.n_rows;
        j["errors_as_leaf"] = nd.errors_as_leaf;
        out.push_back(std::move(j));
    }
    return out.dump();
}

CartTree cart_grow(const Dataset& data) {
    Grower grower(data);
    std::vector<int> rows(data.size());
    std::iota(rows.begin(), rows.end(), 0);
    grower.grow(rows);
    return CartTree(std::move(grower.nodes));
}

namespace {

// Mutable pruning state over the grown tree: pruned[t] means t now acts as
// a leaf. Weakest-link scores are exact rationals, compared by
// cross-multiplication.
struct PruneState {
    const std::vector<CartNode>& nodes;
    const int n;
    std::vector<bool> pruned;
    std::vector<bool> visible;    // not buried under a pruned ancestor
    std::vector<int> sub_errors;  // errors over current leaves under t
    std::vector<int> sub_leaves;

    explicit PruneState(const CartTree& tree, int sample_size)
        : nodes(tree.nodes()), n(sample_size), pruned(nodes.size(), false),
          visible(nodes.size(), false), sub_errors(nodes.size(), 0), sub_leaves(nodes.size(), 0) {
        refresh();
    }

    bool is_leaf(int t) const { return nodes[t].feature < 0 || pruned[t]; }
    bool active(int t) const { return visible[t] && !is_leaf(t); }

    void refresh() {
        // Children follow parents in storage order: a reverse sweep is a
        // post-order accumulation, a forward sweep a pre-order one.
        for (int t = static_cast<int>(nodes.size()) - 1; t >= 0; --t) {
            if (is_leaf(t)) {
                sub_errors[t] = nodes[t].errors_as_leaf;
                sub_leaves[t] = 1;
            } else {
                sub_errors[t] = sub_errors[nodes[t].left] + sub_errors[nodes[t].right];
                sub_leaves[t] = sub_leaves[nodes[t].left] + sub_leaves[nodes[t].right];
            }
        }
        std::fill(visible.begin(), visible.end(), false);
        visible[0] = true;
        for (int t = 0; t < static_cast<int>(nodes.size()); ++t) {
            if (!visible[t] || is_leaf(t)) continue;
            visible[nodes[t].left] = true;
            visible[nodes[t].right] = true;
        }
    }

    // g(t) = (errors_as_leaf - sub_errors) / (n * (sub_leaves - 1))
    std::int64_t g_num(int t) const { return nodes[t].errors_as_leaf - sub_errors[t]; }
    std::int64_t g_den(int t) const { return static_cast<std::int64_t>(n) * (sub_leaves[t] - 1); }

    // Collapses every active node whose g equals (num/den).
    void prune_at(std::int64_t num, std::int64_t den) {
        bool any = false;
        for (int t = 0; t < static_cast<int>(nodes.size()); ++t) {
            if (!active(t)) continue;
            if (g_num(t) * den == num * g_den(t)) {
                pruned[t] = true;
                any = true;
            }
        }
        if (any) refresh();
    }

    // Minimal weakest-link score among active nodes; false when the tree is
    // fully collapsed.
    bool min_g(std::int64_t& num, std::int64_t& den) const {
        bool found = false;
        for (int t = 0; t < static_cast<int>(nodes.size()); ++t) {
            if (!active(t)) continue;
            const std::int64_t tn = g_num(t), td = g_den(t);
            if (!found || tn * den < num * td) {
                num = tn;
                den = td;
                found = true;
            }
        }
        return found;
    }

    // Compact copy of the current pruned structure, root first.
    CartTree snapshot() const {
        std::vector<CartNode> out;
        snapshot_rec(0, out);
        return CartTree(std::move(out));
    }

    int snapshot_rec(int t, std::vector<CartNode>& out) const {
        const int id = static_cast<int>(out.size());
        out.push_back(nodes[t]);
        if (is_leaf(t)) {
            out[id].feature = -1;
            out[id].left = out[id].right = -1;
        } else {
            out[id].left = snapshot_rec(nodes[t].left, out);
            out[id].right = snapshot_rec(nodes[t].right, out);
        }
        return id;
    }
};

}  // namespace

PrunePath cart_prune_path(const CartTree& tree, const Dataset& data) {
    PruneState state(tree, data.size());

    // Collapse everything that costs no training error before recording the
    // alpha = 0 entry: the path holds the smallest optimal subtree per
    // penalty, including at zero.
    while (true) {
        std::int64_t num = 0, den = 1;
        if (!state.min_g(num, den) || num != 0) break;
        state.prune_at(0, 1);
    }

    std::vector<PruneEntry> entries;
    entries.push_back(PruneEntry{0.0, 0, 1, state.snapshot()});

    while (true) {
        std::int64_t num = 0, den = 1;
        if (!state.min_g(num, den)) break;
        state.prune_at(num, den);
        // Cascading ties: collapsing can re-expose the same critical value
        // higher up; keep pruning until the minimum strictly rises.
        while (true) {
            std::int64_t num2 = 0, den2 = 1;
            if (!state.min_g(num2, den2)) break;
            if (num2 * den > num * den2) break;
            state.prune_at(num2, den2);
        }
        entries.push_back(PruneEntry{static_cast<double>(num) / static_cast<double>(den), num, den,
                                     state.snapshot()});
    }
    return PrunePath(std::move(entries));
}

PrunePath::PrunePath(std::vector<PruneEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("PrunePath: empty");
    if (entries_.front().alpha != 0.0) throw std::invalid_argument("PrunePath: must start at 0");
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (!(entries_[i].alpha > entries_[i - 1].alpha))
            throw std::invalid_argument("PrunePath: breakpoints not increasing");
        if (!(entries_[i].tree.leaf_count() < entries_[i - 1].tree.leaf_count()))
            throw std::invalid_argument("PrunePath: subtrees not strictly nested");
    }
    if (entries_.back().tree.leaf_count() != 1)
        throw std::invalid_argument("PrunePath: must end at the root-only tree");
}

const CartTree& PrunePath::select(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("PrunePath::select: alpha must be >= 0");
    std::size_t i = entries_.size() - 1;
    while (entries_[i].alpha > alpha) --i;
    return entries_[i].tree;
}

namespace {

class CartClassifier : public Classifier {
public:
    CartClassifier(std::shared_ptr<const PrunePath> path, const CartTree* tree)
        : path_(std::move(path)), tree_(tree) {}

    Label predict(std::span<const double> x) const override { return tree_->predict(x); }

    const CartTree& tree() const { return *tree_; }

private:
    std::shared_ptr<const PrunePath> path_;  // keeps the selected tree alive
    const CartTree* tree_;
};

std::shared_ptr<const PrunePath> grow_path(const DataPtr& data) {
    auto tree = cart_grow(*data);
    return std::make_shared<const PrunePath>(cart_prune_path(tree, *data));
}

// Per-dataset cache of prune paths shared by all rules of one family.
struct CartCache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::shared_ptr<const PrunePath>> paths;

    std::shared_ptr<const PrunePath> path_for(const DataPtr& data) {
        const std::uint64_t key = data->content_hash();
        std::lock_guard<std::mutex> lock(mutex);
        auto it = paths.find(key);
        if (it != paths.end()) return it->second;
        auto path = grow_path(data);
        paths.emplace(key, path);
        return path;
    }
};

ClassifierPtr classifier_for(std::shared_ptr<const PrunePath> path, double alpha) {
    const CartTree* tree = &path->select(alpha);
    return std::make_shared<CartClassifier>(std::move(path), tree);
}

}  // namespace

LearningRule cart_rule(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("cart_rule: alpha must be >= 0");
    char id[48];
    std::snprintf(id, sizeof id, "cart-alpha=%.6e", alpha);
    return LearningRule{id, [alpha](const DataPtr& data) {
                            return classifier_for(grow_path(data), alpha);
                        }};
}

std::vector<LearningRule> cart_family(const CartGrid& grid) {
    if (grid.count < 1) throw std::invalid_argument("cart_family: empty grid");
    if (grid.alpha_min <= 0.0 || grid.ratio <= 1.0)
        throw std::invalid_argument("cart_family: need alpha_min > 0 and ratio > 1");
    auto cache = std::make_shared<CartCache>();
    std::vector<LearningRule> family;
    family.reserve(grid.count);
    double alpha = grid.alpha_min;
    for (int g = 0; g < grid.count; ++g, alpha *= grid.ratio) {
        char id[64];
        std::snprintf(id, sizeof id, "cart-g%02d-alpha=%.6e", g, alpha);
        family.push_back(LearningRule{id, [cache, alpha](const DataPtr& data) {
                                          return classifier_for(cache->path_for(data), alpha);
                                      }});
    }
    return family;
}

}  // namespace agghoo
