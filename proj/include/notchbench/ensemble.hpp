#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "notchbench/cart.hpp"
#include "notchbench/rng.hpp"

namespace notchbench {

struct EnsembleParams {
    int n_trees = 100;
    std::size_t sample_size = 0;  // bootstrap draws per tree; 0 = training size
    int mtry = 0;                 // candidate features per node; fit_bagged forces p
    bool bootstrap = true;        // false = every tree sees the full training set
    TreeParams tree;
    std::uint64_t seed = 0;
    bool parallel = true;
};

struct Ensemble {
    std::vector<DecisionTree> trees;
    std::vector<std::vector<std::size_t>> oob;  // per-tree out-of-bag rows, sorted
    EnsembleParams params;
    std::size_t n_features = 0;
};

struct BootstrapSample {
    std::vector<std::size_t> sample;  // n draws with replacement, in draw order
    std::vector<std::size_t> oob;     // indices never drawn, sorted
};

/// n uniform draws with replacement from 0..n_rows-1 plus the complement of
/// the drawn support.
BootstrapSample bootstrap_sample(std::size_t n_rows, std::size_t n, Rng& rng);

/// ceil(sqrt(p)), the usual random-forest default.
int default_mtry(std::size_t p);

/// Bootstrap-aggregated trees with full-feature node splits (mtry = p).
Ensemble fit_bagged(const FeatureMatrix& x, const std::vector<int>& y, EnsembleParams params);

/// Bagging plus per-node draws of params.mtry candidate features. Requires
/// mtry >= 1.
Ensemble fit_random_forest(const FeatureMatrix& x, const std::vector<int>& y,
                           EnsembleParams params);

/// Votes per class label for one input; the counts sum to n_trees.
std::map<int, long long> vote_counts(const Ensemble& e, const std::vector<double>& x);

/// Majority vote; ties break toward the smaller class label.
int predict_ensemble(const Ensemble& e, const std::vector<double>& x);

std::vector<int> predict_ensemble_batch(const Ensemble& e, const FeatureMatrix& x,
                                        bool parallel);

/// Permutation importance: per feature, the mean over trees (with non-empty
/// out-of-bag sets) of the drop in out-of-bag accuracy after permuting that
/// feature's column within the tree's out-of-bag rows. Permutations draw from
/// per-(tree, feature) streams derived from the ensemble seed.
std::vector<double> variable_importance(const Ensemble& e, const FeatureMatrix& x,
                                        const std::vector<int>& y);

}  // namespace notchbench
