#pragma once

#include <vector>

#include "agghoo/core.hpp"

namespace agghoo {

// Local-polynomial estimate of P(Y=1 | X=x) for binary problems: weighted
// least squares over polynomials of total degree <= degree, Gaussian kernel
// weights at bandwidth h, evaluated at its own expansion point. Returns 0
// when the scaled design matrix is ill-posed (smallest singular value below
// 1/log n).
double localpoly_eta(int degree, double h, const Dataset& data, std::span<const double> x);

// Plug-in classifier: predicts 1 when localpoly_eta >= 1/2.
ClassifierPtr localpoly_train(int degree, double h, const DataPtr& data);

LearningRule localpoly_rule(int degree, double h);

// Rules over the (degree, bandwidth 1/k) grid, degree in 1..max_degree and
// k in 1..max_k.
std::vector<LearningRule> lp_collection(int max_degree, int max_k);

}  // namespace agghoo
