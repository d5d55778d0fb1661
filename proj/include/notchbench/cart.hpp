#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "notchbench/rng.hpp"

namespace notchbench {

using FeatureMatrix = std::vector<std::vector<double>>;

/// Rows with feature value <= threshold go left.
struct SplitRule {
    int feature = -1;
    double threshold = 0.0;
};

struct TreeParams {
    int min_samples_split = 2;
    int max_depth = 0;      // 0 = unlimited
    int feature_subset = 0; // candidate features per node; 0 or >= p = all
};

struct TreeNode {
    bool leaf = false;
    SplitRule rule;                 // set on internal nodes
    int left = -1;
    int right = -1;
    int label = 0;                  // set on leaves
    std::vector<long long> counts;  // leaf training counts, indexed like DecisionTree::classes
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<int> classes;     // sorted distinct training labels
    std::size_t n_features = 0;
    TreeParams params;
};

/// Gini impurity 1 - sum((count_c / total)^2). Throws EmptyNode when the
/// counts sum to zero.
double gini(const std::vector<long long>& counts);

/// Scans midpoint thresholds between consecutive distinct sorted values of
/// each candidate feature over the given rows and returns the rule minimizing
/// weighted child impurity, or nothing when no split reduces impurity. Ties
/// break toward the lower feature index, then the lower threshold.
std::optional<SplitRule> best_split(const FeatureMatrix& x, const std::vector<int>& y,
                                    const std::vector<std::size_t>& rows,
                                    const std::vector<int>& candidate_features);

/// Grows an unpruned tree by recursive partitioning. When
/// params.feature_subset names fewer features than x has, each node draws that
/// many distinct candidate features from `rng`; otherwise the draw is skipped
/// and `rng` is never touched.
DecisionTree fit_tree(const FeatureMatrix& x, const std::vector<int>& y,
                      const TreeParams& params, Rng& rng);

/// Same, fitting only the listed rows (repeats allowed, as in a bootstrap
/// sample).
DecisionTree fit_tree_rows(const FeatureMatrix& x, const std::vector<int>& y,
                           const std::vector<std::size_t>& rows, const TreeParams& params,
                           Rng& rng);

int predict_tree(const DecisionTree& tree, const std::vector<double>& x);

}  // namespace notchbench
