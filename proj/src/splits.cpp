#include "agghoo/splits.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "agghoo/rng.hpp"

namespace agghoo {

std::string SplitPlan::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["scheme"] = scheme;
    j["train_size"] = train_size;
    j["h2_strict"] = h2_strict;
    j["tau"] = tau;
    j["V"] = V();
    j["seed"] = seed;
    auto& sets_json = j["sets"];
    sets_json = nlohmann::json::array();
    for (const auto& s : sets) sets_json.push_back(s.indices());
    return j.dump();
}

SplitPlan monte_carlo_splits(int n, double tau, int V, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("monte_carlo_splits: n must be >= 2");
    if (V < 1) throw std::invalid_argument("monte_carlo_splits: V must be >= 1");
    const int train_size = static_cast<int>(std::floor(tau * n));
    if (train_size < 1 || train_size > n - 1)
        throw std::invalid_argument("monte_carlo_splits: degenerate split");

    SplitPlan plan;
    plan.n = n;
    plan.train_size = train_size;
    plan.h2_strict = true;
    plan.scheme = "monte-carlo";
    plan.tau = tau;
    plan.seed = seed;
    plan.sets.reserve(V);
    // Each set has its own stream keyed on (seed, j): plans replay exactly
    // and sets are independent across j.
    for (int j = 0; j < V; ++j) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(j));
        plan.sets.push_back(IndexSet::of(rng.sample_without_replacement(n, train_size)));
    }
    return plan;
}

SplitPlan vfold_splits(int n, int V, std::uint64_t seed) {
    if (V < 2) throw std::invalid_argument("vfold_splits: V must be >= 2");
    if (V > n) throw std::invalid_argument("vfold_splits: V must be <= n");

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Rng rng = Rng::stream(seed, 0);
    rng.shuffle(perm);

    SplitPlan plan;
    plan.n = n;
    plan.h2_strict = (n % V == 0);
    plan.scheme = "vfold";
    plan.tau = 0.0;
    plan.seed = seed;
    plan.sets.reserve(V);

    const int base = n / V;
    const int extra = n % V;  // first `extra` folds get one more row
    int offset = 0;
    for (int j = 0; j < V; ++j) {
        const int fold_size = base + (j < extra ? 1 : 0);
        std::vector<int> fold(perm.begin() + offset, perm.begin() + offset + fold_size);
        offset += fold_size;
        plan.sets.push_back(IndexSet::of(std::move(fold)).complement(n));
    }
    plan.train_size = plan.sets.front().size();
    return plan;
}

}  // namespace agghoo
