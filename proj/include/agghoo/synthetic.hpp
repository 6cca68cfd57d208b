#pragma once

#include <cstdint>
#include <span>

#include "agghoo/core.hpp"

namespace agghoo {

// Binary problem on [0,1]^2: P(Y=1|X=x) is a steep sigmoid ridge around the
// level set g(x) = b.
namespace sigmoid_problem {

constexpr double kOffset = 1.18;
constexpr double kScale = 0.05;

double g(double u, double v);
double eta(double u, double v);

}  // namespace sigmoid_problem

DataPtr sample_sigmoid(int n, std::uint64_t seed);
ClassifierPtr bayes_sigmoid();

// Integral of min(eta, 1-eta) over the unit square by composite Simpson
// with grid_size intervals per axis.
double bayes_risk_sigmoid(int grid_size = 2000);

// Gaussian mixture problem on R^d, d >= 6. Class 0 is standard normal in
// every coordinate; class 1 shifts coordinates 1..3 by (1,2,3) with
// probability 0.7 and coordinates 4..6 by (1,2,3) with probability 0.3.
double eta_gaussmix(std::span<const double> x);

DataPtr sample_gaussmix(int n, int d, std::uint64_t seed);
ClassifierPtr bayes_gaussmix(int d);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long draws = 0;
};

// Monte-Carlo estimate of E[min(eta, 1-eta)] under the mixture marginal.
MonteCarloEstimate bayes_risk_gaussmix(int d, long mc_n, std::uint64_t seed);

}  // namespace agghoo
