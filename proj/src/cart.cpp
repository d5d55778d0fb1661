#include "notchbench/cart.hpp"

#include <algorithm>
#include <string>

#include "notchbench/errors.hpp"

namespace notchbench {

double gini(const std::vector<long long>& counts) {
    long long total = 0;
    for (long long c : counts) {
        if (c < 0) throw BadParamsError("negative class count");
        total += c;
    }
    if (total == 0) throw EmptyNodeError("gini of an empty node");
    double sum_sq = 0.0;
    for (long long c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

// Splits are ranked without floating error. With class-count squares
// L = sum_c left_c^2 and R = sum_c right_c^2, weighted child impurity beats
// the parent iff L/nl + R/nr > T/n (T = parent squares), and candidates are
// ordered by the same rational expression; both comparisons are done in
// 128-bit integers.
struct SplitScan {
    const FeatureMatrix& x;
    const std::vector<int>& y_ids;  // labels remapped to 0..k-1
    std::size_t n_classes;
};

struct SplitScore {
    long long numer = 0;  // L*nr + R*nl
    long long nl = 0;
    long long nr = 0;

    bool better_than(const SplitScore& o) const {
        return static_cast<__int128>(numer) * o.nl * o.nr >
               static_cast<__int128>(o.numer) * nl * nr;
    }
    bool improves(long long parent_sq, long long n) const {
        return static_cast<__int128>(numer) * n > static_cast<__int128>(parent_sq) * nl * nr;
    }
};

std::optional<SplitRule> scan_best_split(const SplitScan& s, const std::vector<std::size_t>& rows,
                                         const std::vector<int>& candidate_features) {
    const std::size_t n = rows.size();
    std::vector<long long> total_counts(s.n_classes, 0);
    for (std::size_t r : rows) ++total_counts[static_cast<std::size_t>(s.y_ids[r])];

    long long parent_sq = 0;
    for (long long c : total_counts) parent_sq += c * c;

    std::optional<SplitRule> best;
    SplitScore best_score;

    std::vector<std::pair<double, int>> vals(n);
    std::vector<long long> left(s.n_classes);
    for (int f : candidate_features) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = rows[i];
            vals[i] = {s.x[r][static_cast<std::size_t>(f)], s.y_ids[r]};
        }
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::fill(left.begin(), left.end(), 0);
        long long left_sq = 0, right_sq = parent_sq;
        long long nl = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto cls = static_cast<std::size_t>(vals[i].second);
            const long long cl = left[cls];
            const long long cr = total_counts[cls] - cl;
            left_sq += 2 * cl + 1;
            right_sq -= 2 * cr - 1;
            ++left[cls];
            ++nl;
            if (vals[i].first == vals[i + 1].first) continue;
            const long long nr = static_cast<long long>(n) - nl;
            const SplitScore score{left_sq * nr + right_sq * nl, nl, nr};
            if (!score.improves(parent_sq, static_cast<long long>(n))) continue;
            if (!best || score.better_than(best_score)) {
                best_score = score;
                best = SplitRule{f, 0.5 * (vals[i].first + vals[i + 1].first)};
            }
        }
    }
    return best;
}

struct TreeBuilder {
    const SplitScan& scan;
    const TreeParams& params;
    Rng& rng;
    std::size_t p;
    bool subsample;
    DecisionTree& tree;

    int make_leaf(const std::vector<std::size_t>& rows) {
        std::vector<long long> counts(scan.n_classes, 0);
        for (std::size_t r : rows) ++counts[static_cast<std::size_t>(scan.y_ids[r])];
        int best_id = 0;
        for (std::size_t c = 1; c < counts.size(); ++c)
            if (counts[c] > counts[static_cast<std::size_t>(best_id)])
                best_id = static_cast<int>(c);
        TreeNode node;
        node.leaf = true;
        node.label = tree.classes[static_cast<std::size_t>(best_id)];
        node.counts = std::move(counts);
        tree.nodes.push_back(std::move(node));
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    bool is_pure(const std::vector<std::size_t>& rows) const {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (scan.y_ids[rows[i]] != scan.y_ids[rows[0]]) return false;
        return true;
    }

    int build(const std::vector<std::size_t>& rows, int depth) {
        const bool depth_capped = params.max_depth > 0 && depth >= params.max_depth;
        if (depth_capped || rows.size() < static_cast<std::size_t>(params.min_samples_split) ||
            is_pure(rows))
            return make_leaf(rows);

        std::vector<int> candidates;
        if (subsample) {
            candidates = rng.sample_distinct(static_cast<int>(p), params.feature_subset);
        } else {
            candidates.resize(p);
            for (std::size_t j = 0; j < p; ++j) candidates[j] = static_cast<int>(j);
        }

        const auto rule = scan_best_split(scan, rows, candidates);
        if (!rule) return make_leaf(rows);

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (scan.x[r][static_cast<std::size_t>(rule->feature)] <= rule->threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }

        const int self = static_cast<int>(tree.nodes.size());
        TreeNode node;
        node.rule = *rule;
        tree.nodes.push_back(std::move(node));
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left;
        tree.nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

}  // namespace

std::optional<SplitRule> best_split(const FeatureMatrix& x, const std::vector<int>& y,
                                    const std::vector<std::size_t>& rows,
                                    const std::vector<int>& candidate_features) {
    if (rows.empty()) throw EmptyDatasetError("best_split over zero rows");
    if (candidate_features.empty()) throw BadParamsError("no candidate features");

    std::vector<int> classes;
    for (std::size_t r : rows) classes.push_back(y[r]);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::vector<int> y_ids(y.size(), 0);
    for (std::size_t r : rows)
        y_ids[r] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), y[r]) -
                                    classes.begin());

    SplitScan scan{x, y_ids, classes.size()};
    return scan_best_split(scan, rows, candidate_features);
}

DecisionTree fit_tree_rows(const FeatureMatrix& x, const std::vector<int>& y,
                           const std::vector<std::size_t>& rows, const TreeParams& params,
                           Rng& rng) {
    if (rows.empty()) throw EmptyDatasetError("cannot fit a tree on zero rows");
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    if (params.min_samples_split < 2) throw BadParamsError("min_samples_split must be >= 2");

    const std::size_t p = x.empty() ? 0 : x[0].size();

    DecisionTree tree;
    tree.n_features = p;
    tree.params = params;
    {
        std::vector<int> classes;
        for (std::size_t r : rows) classes.push_back(y[r]);
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        tree.classes = std::move(classes);
    }
    std::vector<int> y_ids(y.size(), 0);
    for (std::size_t r : rows)
        y_ids[r] = static_cast<int>(
            std::lower_bound(tree.classes.begin(), tree.classes.end(), y[r]) -
            tree.classes.begin());

    SplitScan scan{x, y_ids, tree.classes.size()};
    const bool subsample = params.feature_subset >= 1 &&
                           static_cast<std::size_t>(params.feature_subset) < p;
    TreeBuilder builder{scan, params, rng, p, subsample, tree};
    builder.build(rows, 0);
    return tree;
}

DecisionTree fit_tree(const FeatureMatrix& x, const std::vector<int>& y,
                      const TreeParams& params, Rng& rng) {
    std::vector<std::size_t> rows(x.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return fit_tree_rows(x, y, rows, params, rng);
}

int predict_tree(const DecisionTree& tree, const std::vector<double>& x) {
    if (x.size() != tree.n_features)
        throw DimensionMismatchError("input has " + std::to_string(x.size()) +
                                     " features, tree expects " +
                                     std::to_string(tree.n_features));
    int idx = 0;
    while (!tree.nodes[static_cast<std::size_t>(idx)].leaf) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
        idx = x[static_cast<std::size_t>(node.rule.feature)] <= node.rule.threshold ? node.left
                                                                                   : node.right;
    }
    return tree.nodes[static_cast<std::size_t>(idx)].label;
}

}  // namespace notchbench
