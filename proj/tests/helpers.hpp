#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "agghoo/core.hpp"
#include "agghoo/rng.hpp"

namespace testutil {

using namespace agghoo;

class FnClassifier : public Classifier {
public:
    using Fn = std::function<Label(std::span<const double>)>;
    explicit FnClassifier(Fn fn) : fn_(std::move(fn)) {}
    Label predict(std::span<const double> x) const override { return fn_(x); }

private:
    Fn fn_;
};

inline ClassifierPtr fn_classifier(FnClassifier::Fn fn) {
    return std::make_shared<FnClassifier>(std::move(fn));
}

inline ClassifierPtr constant_classifier(Label y) {
    return fn_classifier([y](std::span<const double>) { return y; });
}

// 1-D dataset with features 0, 1, 2, ...
inline DataPtr indexed_dataset(const std::vector<Label>& labels, int class_count = 2) {
    std::vector<double> features;
    for (std::size_t i = 0; i < labels.size(); ++i) features.push_back(static_cast<double>(i));
    return std::make_shared<Dataset>(1, class_count, std::move(features), labels);
}

inline DataPtr dataset_2d(const std::vector<std::pair<double, double>>& points,
                          const std::vector<Label>& labels, int class_count = 2) {
    std::vector<double> features;
    for (const auto& [u, v] : points) {
        features.push_back(u);
        features.push_back(v);
    }
    return std::make_shared<Dataset>(2, class_count, std::move(features), labels);
}

inline LearningRule constant_rule(const std::string& id, Label y) {
    return LearningRule{id, [y](const DataPtr&) { return constant_classifier(y); }};
}

// Ignores the training data and returns a fixed prediction function; with
// fn the true labeling function this is a perfect rule.
inline LearningRule fn_rule(const std::string& id, FnClassifier::Fn fn) {
    return LearningRule{id, [fn](const DataPtr&) { return fn_classifier(fn); }};
}

// Predicts the true label of the nearest training row by feature identity;
// behaves as a perfect classifier whenever test features reproduce
// training features.
inline LearningRule memorizing_rule(const std::string& id) {
    return LearningRule{id, [](const DataPtr& data) {
                            return fn_classifier([data](std::span<const double> x) {
                                int best = 0;
                                double best_d = -1.0;
                                for (int i = 0; i < data->size(); ++i) {
                                    const auto r = data->row(i);
                                    double d = 0.0;
                                    for (std::size_t c = 0; c < x.size(); ++c)
                                        d += (r[c] - x[c]) * (r[c] - x[c]);
                                    if (best_d < 0.0 || d < best_d) {
                                        best_d = d;
                                        best = i;
                                    }
                                }
                                return data->label(best);
                            });
                        }};
}

}  // namespace testutil
