#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agghoo/cart.hpp"
#include "agghoo/core.hpp"
#include "agghoo/dataio.hpp"

namespace agghoo {

enum class Scheme { Agghoo, Cv, Holdout, Subag };

std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

// One selector to evaluate. tau > 0 requests Monte-Carlo training sets of
// size floor(tau*n); tau == 0 requests V-fold splits. Settings with equal
// (tau, V) share one split plan and one family evaluation per replicate.
struct SchemeSetting {
    Scheme scheme = Scheme::Agghoo;
    double tau = 0.7;
    int V = 10;
};

enum class BenchProblem { Sigmoid, GaussMix, Uci };
enum class BenchFamily { Knn, Cart, Lp };

struct ExperimentConfig {
    BenchProblem problem = BenchProblem::Sigmoid;
    int gauss_d = 7;
    std::string uci_path;
    MissingPolicy missing_policy = MissingPolicy::ImputeMedian;

    BenchFamily family = BenchFamily::Knn;
    int knn_max_k = 29;
    CartGrid cart_grid;
    int lp_max_degree = 3;
    int lp_max_k = 20;

    int n = 500;
    int test_n = 1000;  // synthetic problems; UCI tests on the resplit remainder
    int replicates = 100;
    std::vector<SchemeSetting> settings;
    double inner_tau = 0.8;  // inner training fraction for Subag

    std::uint64_t master_seed = 0;
    int threads = 0;  // 0 = hardware concurrency
    bool include_oracle = true;
    std::string trace_path;  // JSON-lines trace of per-split scores when set
};

// excess is NaN when the problem has no reference classifier (UCI).
struct ReplicateOutcome {
    int replicate = 0;
    std::string scheme;
    double tau = 0.0;
    int V = 0;
    double excess = 0.0;
    double risk = 0.0;
    std::string rule_ids;  // winners, '|'-separated for vote schemes
};

struct AggregateOutcome {
    std::string scheme;
    double tau = 0.0;
    int V = 0;
    int count = 0;
    double mean_excess = 0.0;
    double se_excess = 0.0;
    double mean_risk = 0.0;
    double se_risk = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReplicateOutcome> rows;        // replicate-major, settings order, oracle last
    std::vector<AggregateOutcome> aggregates;  // settings order, oracle last
    std::vector<std::pair<int, std::string>> failures;
    double runtime_seconds = 0.0;
    std::uint64_t uci_checksum = 0;

    const AggregateOutcome& aggregate(const std::string& scheme, double tau, int V) const;
    // Per-replicate series in replicate order, failures skipped.
    std::vector<double> excess_series(const std::string& scheme, double tau, int V) const;
    std::vector<double> risk_series(const std::string& scheme, double tau, int V) const;
};

// Paired design: within a replicate every setting sees the same sample,
// test set and (for equal (tau, V)) the same plan. Deterministic given the
// master seed, independently of the worker count.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Best achievable excess over the family with full-sample training,
// measured against `reference` on `test`. Null reference gives the best
// test risk instead.
double oracle_excess(const std::vector<LearningRule>& family, const DataPtr& data,
                     const ClassifierPtr& reference, const Dataset& test,
                     std::string* winner_id = nullptr);

// CSV per the fixed schema; a metadata sidecar <path>.meta.json carries
// runtime and provenance so the CSV stays byte-stable.
void report_write(const ExperimentReport& report, const std::string& csv_path);

// Mean excess risk (or risk when excess is unavailable) against tau, one
// series per (scheme, V), error bars at +-2 standard errors.
void report_plot(const ExperimentReport& report, const std::string& svg_path);

// Samples for the aggregation oracle inequality at one (tau, V): per
// replicate, the Agghoo excess and the best excess over rules trained on
// the plan's first training set (n - p rows).
struct OracleInequalitySamples {
    std::vector<double> agghoo_excess;
    std::vector<double> oracle_excess;
    int p = 0;
    std::size_t family_size = 0;
};

OracleInequalitySamples oracle_inequality_samples(const ExperimentConfig& config, double tau, int V);

}  // namespace agghoo
