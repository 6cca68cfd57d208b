#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agghoo/core.hpp"

namespace agghoo {

// A collection of training index sets. Generation sees only (n, parameters,
// seed), never data values, so plans are independent of the sample by
// construction. All sets have the same cardinality unless h2_strict is
// false (V-fold with V not dividing n, where sizes differ by one).
struct SplitPlan {
    int n = 0;
    int train_size = 0;  // |T_1|
    bool h2_strict = true;
    std::string scheme;  // "monte-carlo" | "vfold"
    double tau = 0.0;    // monte-carlo training fraction; 0 for vfold
    std::uint64_t seed = 0;
    std::vector<IndexSet> sets;

    int V() const { return static_cast<int>(sets.size()); }

    // Full provenance record, including explicit index lists.
    std::string to_json() const;
};

// V training sets drawn independently and uniformly among the subsets of
// {0,...,n-1} with cardinality floor(tau*n). Sets may overlap across j.
SplitPlan monte_carlo_splits(int n, double tau, int V, std::uint64_t seed);

// A random permutation of {0,...,n-1} is cut into V folds differing in size
// by at most one; T_j is the complement of fold j.
SplitPlan vfold_splits(int n, int V, std::uint64_t seed);

}  // namespace agghoo
