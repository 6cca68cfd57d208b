#include "agghoo/knn.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace agghoo {

namespace {

class KnnClassifier : public Classifier {
public:
    KnnClassifier(int k, DataPtr data) : k_(k), data_(std::move(data)) {}

    Label predict(std::span<const double> x) const override {
        const Dataset& d = *data_;
        const int n = d.size();
        std::vector<std::pair<double, int>> dist;
        dist.reserve(n);
        for (int i = 0; i < n; ++i) {
            const auto r = d.row(i);
            double s = 0.0;
            for (int c = 0; c < d.dim(); ++c) {
                const double diff = r[c] - x[c];
                s += diff * diff;
            }
            dist.emplace_back(s, i);
        }
        // (distance, row index) pairs are all distinct, so the k nearest are
        // uniquely determined.
        std::nth_element(dist.begin(), dist.begin() + (k_ - 1), dist.end());
        std::vector<int> counts(d.class_count(), 0);
        for (int i = 0; i < k_; ++i) ++counts[d.label(dist[i].second)];
        Label best = 0;
        for (Label y = 1; y < d.class_count(); ++y)
            if (counts[y] > counts[best]) best = y;
        return best;
    }

private:
    int k_;
    DataPtr data_;
};

}  // namespace

ClassifierPtr knn_train(int k, const DataPtr& data) {
    if (!data) throw std::invalid_argument("knn_train: null dataset");
    if (k < 1) throw std::invalid_argument("knn_train: k must be >= 1");
    if (k % 2 == 0) throw std::invalid_argument("knn_train: k must be odd");
    if (k > data->size()) throw std::invalid_argument("knn_train: k exceeds sample size");
    return std::make_shared<KnnClassifier>(k, data);
}

LearningRule knn_rule(int k) {
    char id[24];
    std::snprintf(id, sizeof id, "knn-k=%03d", k);
    return LearningRule{id, [k](const DataPtr& data) { return knn_train(k, data); }};
}

std::vector<LearningRule> knn_family(int max_k) {
    if (max_k < 1) throw std::invalid_argument("knn_family: max_k must be >= 1");
    std::vector<LearningRule> family;
    for (int k = 1; k <= max_k; k += 2) family.push_back(knn_rule(k));
    return family;
}

}  // namespace agghoo
