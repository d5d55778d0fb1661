#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "notchbench/ensemble.hpp"
#include "notchbench/errors.hpp"
#include "notchbench/rng.hpp"

using namespace notchbench;

namespace {

void make_blobs(Rng& rng, int n, FeatureMatrix& x, std::vector<int>& y) {
    for (int i = 0; i < n; ++i) {
        const int cls = rng.uniform_int(1, 3);
        x.push_back({cls * 4.0 + rng.normal() * 0.4, rng.normal()});
        y.push_back(cls);
    }
}

}  // namespace

TEST_CASE("bootstrap sample structure") {
    Rng rng(5);
    const BootstrapSample s = bootstrap_sample(50, 50, rng);
    CHECK_EQ(s.sample.size(), 50);
    std::set<std::size_t> drawn(s.sample.begin(), s.sample.end());
    for (auto i : s.sample) CHECK_LT(i, 50);
    for (auto i : s.oob) CHECK_EQ(drawn.count(i), 0);
    CHECK_EQ(drawn.size() + s.oob.size(), 50);
    CHECK(std::is_sorted(s.oob.begin(), s.oob.end()));
    CHECK_THROWS_AS(bootstrap_sample(0, 5, rng), BadParamsError);
    CHECK_THROWS_AS(bootstrap_sample(5, 0, rng), BadParamsError);
}

TEST_CASE("oob fraction near 1/e") {
    double total = 0;
    for (int t = 0; t < 1000; ++t) {
        Rng rng(1000 + t);
        total += bootstrap_sample(100, 100, rng).oob.size() / 100.0;
    }
    const double mean = total / 1000.0;
    CHECK_GT(mean, 0.346);
    CHECK_LT(mean, 0.386);
}

TEST_CASE("default mtry is ceil(sqrt(p))") {
    CHECK_EQ(default_mtry(1), 1);
    CHECK_EQ(default_mtry(9), 3);
    CHECK_EQ(default_mtry(10), 4);
    CHECK_EQ(default_mtry(20), 5);
}

TEST_CASE("forest with mtry = p equals bagged trees") {
    Rng rng(21);
    FeatureMatrix x;
    std::vector<int> y;
    make_blobs(rng, 120, x, y);

    EnsembleParams params;
    params.n_trees = 25;
    params.seed = 77;
    const Ensemble bagged = fit_bagged(x, y, params);
    EnsembleParams rf_params = params;
    rf_params.mtry = 2;  // p
    const Ensemble forest = fit_random_forest(x, y, rf_params);

    FeatureMatrix probes;
    for (int i = 0; i < 50; ++i) probes.push_back({rng.uniform(0, 16), rng.normal()});
    CHECK_EQ(predict_ensemble_batch(bagged, probes, false),
             predict_ensemble_batch(forest, probes, false));
}

TEST_CASE("ensembles are deterministic in the seed") {
    Rng rng(22);
    FeatureMatrix x;
    std::vector<int> y;
    make_blobs(rng, 100, x, y);

    EnsembleParams params;
    params.n_trees = 15;
    params.seed = 5;
    const Ensemble a = fit_bagged(x, y, params);
    const Ensemble b = fit_bagged(x, y, params);
    params.seed = 6;
    const Ensemble c = fit_bagged(x, y, params);

    const auto pa = predict_ensemble_batch(a, x, false);
    CHECK_EQ(pa, predict_ensemble_batch(b, x, false));
    bool any_diff = false;
    for (std::size_t t = 0; t < a.trees.size(); ++t)
        any_diff = any_diff || a.oob[t] != c.oob[t];
    CHECK(any_diff);
}

TEST_CASE("parallel fitting and prediction match serial") {
    Rng rng(23);
    FeatureMatrix x;
    std::vector<int> y;
    make_blobs(rng, 150, x, y);

    EnsembleParams params;
    params.n_trees = 20;
    params.seed = 9;
    params.mtry = 1;
    params.parallel = false;
    const Ensemble serial = fit_random_forest(x, y, params);
    params.parallel = true;
    const Ensemble parallel = fit_random_forest(x, y, params);

    CHECK_EQ(predict_ensemble_batch(serial, x, false),
             predict_ensemble_batch(parallel, x, true));
    CHECK_EQ(variable_importance(serial, x, y), variable_importance(parallel, x, y));
    REQUIRE_EQ(serial.oob.size(), parallel.oob.size());
    for (std::size_t t = 0; t < serial.oob.size(); ++t)
        CHECK_EQ(serial.oob[t], parallel.oob[t]);
}

TEST_CASE("vote ties resolve to the smaller class") {
    DecisionTree t3;
    t3.nodes.push_back(TreeNode{true, {}, -1, -1, 3, {1}});
    t3.classes = {3};
    t3.n_features = 1;
    DecisionTree t5 = t3;
    t5.nodes[0].label = 5;
    t5.classes = {5};

    Ensemble e;
    e.trees = {t5, t3};
    e.oob = {{}, {}};
    e.n_features = 1;
    const auto votes = vote_counts(e, {0.0});
    CHECK_EQ(votes.at(3), 1);
    CHECK_EQ(votes.at(5), 1);
    CHECK_EQ(predict_ensemble(e, {0.0}), 3);
}

TEST_CASE("permutation importance flags the informative feature") {
    Rng rng(31);
    FeatureMatrix x;
    std::vector<int> y;
    for (int i = 0; i < 200; ++i) {
        const int cls = rng.uniform_int(1, 2);
        x.push_back({cls == 1 ? -2 + rng.normal() * 0.3 : 2 + rng.normal() * 0.3,
                     rng.normal()});
        y.push_back(cls);
    }
    EnsembleParams params;
    params.n_trees = 40;
    params.seed = 3;
    params.mtry = 1;
    const Ensemble forest = fit_random_forest(x, y, params);
    const auto imp = variable_importance(forest, x, y);
    REQUIRE_EQ(imp.size(), 2);
    CHECK_GT(imp[0], 0.2);
    CHECK_GT(imp[0], imp[1] + 0.1);
    CHECK_EQ(imp, variable_importance(forest, x, y));  // repeatable
}

TEST_CASE("importance needs out-of-bag rows") {
    Rng rng(33);
    FeatureMatrix x;
    std::vector<int> y;
    make_blobs(rng, 40, x, y);
    EnsembleParams params;
    params.n_trees = 5;
    params.bootstrap = false;
    const Ensemble e = fit_bagged(x, y, params);
    for (const auto& o : e.oob) CHECK(o.empty());
    CHECK_THROWS_AS(variable_importance(e, x, y), NoOobError);
}

TEST_CASE("ensemble parameter validation") {
    const FeatureMatrix x = {{1}, {2}};
    const std::vector<int> y = {1, 2};
    EnsembleParams params;
    params.n_trees = 0;
    CHECK_THROWS_AS(fit_bagged(x, y, params), BadParamsError);
    params.n_trees = 3;
    params.sample_size = 5;
    CHECK_THROWS_AS(fit_bagged(x, y, params), BadParamsError);
    params.sample_size = 0;
    params.mtry = 0;
    CHECK_THROWS_AS(fit_random_forest(x, y, params), BadParamsError);
    CHECK_THROWS_AS(fit_bagged({}, {}, EnsembleParams{}), EmptyDatasetError);
}
