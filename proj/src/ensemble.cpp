#include "notchbench/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "notchbench/errors.hpp"
#include "notchbench/parallel.hpp"

namespace notchbench {

BootstrapSample bootstrap_sample(std::size_t n_rows, std::size_t n, Rng& rng) {
    if (n_rows == 0 || n == 0) throw BadParamsError("bootstrap needs n_rows >= 1 and n >= 1");
    BootstrapSample out;
    out.sample.resize(n);
    std::vector<std::uint8_t> drawn(n_rows, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n_rows) - 1));
        out.sample[i] = r;
        drawn[r] = 1;
    }
    for (std::size_t i = 0; i < n_rows; ++i)
        if (!drawn[i]) out.oob.push_back(i);
    return out;
}

int default_mtry(std::size_t p) {
    return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
}

namespace {

Ensemble fit_ensemble(const FeatureMatrix& x, const std::vector<int>& y, EnsembleParams params) {
    if (x.empty()) throw EmptyDatasetError("cannot fit an ensemble on zero rows");
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    if (params.n_trees < 1) throw BadParamsError("n_trees must be >= 1");

    const std::size_t n_rows = x.size();
    const std::size_t p = x[0].size();
    if (params.sample_size == 0) params.sample_size = n_rows;
    if (params.sample_size > n_rows)
        throw BadParamsError("sample_size exceeds the training size");
    params.tree.feature_subset = params.mtry;

    Ensemble e;
    e.params = params;
    e.n_features = p;
    e.trees.resize(static_cast<std::size_t>(params.n_trees));
    e.oob.resize(static_cast<std::size_t>(params.n_trees));

    parallel_for_index(static_cast<std::size_t>(params.n_trees), params.parallel,
                       [&](std::size_t t) {
                           Rng rng = Rng::derive(params.seed, t);
                           std::vector<std::size_t> rows;
                           if (params.bootstrap) {
                               BootstrapSample bs =
                                   bootstrap_sample(n_rows, params.sample_size, rng);
                               rows = std::move(bs.sample);
                               e.oob[t] = std::move(bs.oob);
                           } else {
                               rows.resize(n_rows);
                               for (std::size_t i = 0; i < n_rows; ++i) rows[i] = i;
                           }
                           e.trees[t] = fit_tree_rows(x, y, rows, params.tree, rng);
                       });
    return e;
}

}  // namespace

Ensemble fit_bagged(const FeatureMatrix& x, const std::vector<int>& y, EnsembleParams params) {
    if (x.empty()) throw EmptyDatasetError("cannot fit an ensemble on zero rows");
    params.mtry = static_cast<int>(x[0].size());
    return fit_ensemble(x, y, params);
}

Ensemble fit_random_forest(const FeatureMatrix& x, const std::vector<int>& y,
                           EnsembleParams params) {
    if (params.mtry < 1) throw BadParamsError("random forest needs mtry >= 1");
    return fit_ensemble(x, y, params);
}

std::map<int, long long> vote_counts(const Ensemble& e, const std::vector<double>& x) {
    if (x.size() != e.n_features)
        throw DimensionMismatchError("input has " + std::to_string(x.size()) +
                                     " features, ensemble expects " +
                                     std::to_string(e.n_features));
    std::map<int, long long> votes;
    for (const auto& tree : e.trees) ++votes[predict_tree(tree, x)];
    return votes;
}

int predict_ensemble(const Ensemble& e, const std::vector<double>& x) {
    const auto votes = vote_counts(e, x);
    int best_label = votes.begin()->first;
    long long best_votes = votes.begin()->second;
    for (const auto& [label, n] : votes) {
        if (n > best_votes) {
            best_label = label;
            best_votes = n;
        }
    }
    return best_label;
}

std::vector<int> predict_ensemble_batch(const Ensemble& e, const FeatureMatrix& x,
                                        bool parallel) {
    std::vector<int> out(x.size(), 0);
    parallel_for_index(x.size(), parallel,
                       [&](std::size_t i) { out[i] = predict_ensemble(e, x[i]); });
    return out;
}

namespace {
constexpr std::uint64_t kImportanceSalt = 0x494D504F52544E43ULL;

double oob_accuracy(const DecisionTree& tree, const std::vector<std::size_t>& oob,
                    const FeatureMatrix& x, const std::vector<int>& y) {
    long long hits = 0;
    for (std::size_t r : oob)
        if (predict_tree(tree, x[r]) == y[r]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(oob.size());
}
}  // namespace

std::vector<double> variable_importance(const Ensemble& e, const FeatureMatrix& x,
                                        const std::vector<int>& y) {
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    const std::size_t p = e.n_features;
    const std::size_t n_trees = e.trees.size();

    std::size_t eligible = 0;
    for (const auto& o : e.oob)
        if (!o.empty()) ++eligible;
    if (eligible == 0) throw NoOobError("every tree's out-of-bag set is empty");

    // scores[t*p + j], filled independently per (tree, feature)
    std::vector<double> scores(n_trees * p, 0.0);
    parallel_for_index(n_trees, e.params.parallel, [&](std::size_t t) {
        const auto& oob = e.oob[t];
        if (oob.empty()) return;
        const double base = oob_accuracy(e.trees[t], oob, x, y);
        std::vector<double> probe;
        std::vector<double> column(oob.size());
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < oob.size(); ++i) column[i] = x[oob[i]][j];
            Rng rng = Rng::derive(e.params.seed ^ kImportanceSalt, t * p + j);
            rng.shuffle(column);
            long long hits = 0;
            for (std::size_t i = 0; i < oob.size(); ++i) {
                probe = x[oob[i]];
                probe[j] = column[i];
                if (predict_tree(e.trees[t], probe) == y[oob[i]]) ++hits;
            }
            const double permuted =
                static_cast<double>(hits) / static_cast<double>(oob.size());
            scores[t * p + j] = base - permuted;
        }
    });

    std::vector<double> importance(p, 0.0);
    for (std::size_t t = 0; t < n_trees; ++t) {
        if (e.oob[t].empty()) continue;
        for (std::size_t j = 0; j < p; ++j) importance[j] += scores[t * p + j];
    }
    for (std::size_t j = 0; j < p; ++j) importance[j] /= static_cast<double>(eligible);
    return importance;
}

}  // namespace notchbench
