#pragma once

#include <vector>

#include "agghoo/core.hpp"

namespace agghoo {

// k-nearest-neighbors classifier, Euclidean metric. k must be odd (keeps
// binary votes tie-free) and at most the training size. Distance ties are
// broken by smaller row index, label ties by smaller label.
ClassifierPtr knn_train(int k, const DataPtr& data);

LearningRule knn_rule(int k);

// Rules for k = 1, 3, ..., max_k.
std::vector<LearningRule> knn_family(int max_k);

}  // namespace agghoo
