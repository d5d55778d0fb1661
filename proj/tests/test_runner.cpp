#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "notchbench/config.hpp"
#include "notchbench/errors.hpp"
#include "notchbench/report.hpp"
#include "notchbench/runner.hpp"

using namespace notchbench;

namespace {

ExperimentConfig small_config(const std::string& extra = "") {
    return parse_config_text(
        "synth.companies = 12\n"
        "synth.quarters = 8\n"
        "synth.features = 4\n"
        "synth.informative = 2\n"
        "synth.separation = 2.0\n"
        "mlp.epochs = 20\n"
        "bdt.n_trees = 10\n"
        "rf.n_trees = 10\n"
        "svm.max_passes = 60\n"
        "seed = 11\n" +
        extra);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(name) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("a small synthetic experiment produces a full report") {
    const ExperimentConfig cfg = small_config();
    const EvalReport rep = run_experiment(cfg);
    CHECK_EQ(rep.config_digest, config_hash(cfg));
    CHECK_EQ(rep.data.size(), 12 * 8);
    REQUIRE_EQ(rep.folds.size(), 1);
    const FoldResult& fr = rep.folds[0];
    REQUIRE_EQ(fr.methods.size(), 6);
    for (const MethodResult& mr : fr.methods) {
        CHECK_EQ(mr.predictions.size(), fr.test_rows.size());
        CHECK_EQ(mr.dist.n, static_cast<long long>(fr.test_rows.size()));
        CHECK_GE(mr.st.accuracy, 0.0);
    }
    CHECK_EQ(rep.models.size(), 6);  // one saved pipeline per method
    CHECK(rep.holdout_rows.empty());

    // the three membership lists partition the row set
    std::set<std::size_t> seen;
    for (const auto* rows : {&fr.train_rows, &fr.validation_rows, &fr.test_rows})
        for (std::size_t r : *rows) CHECK(seen.insert(r).second);
    CHECK_EQ(seen.size(), rep.data.size());
}

TEST_CASE("identical config and seed reproduce every prediction") {
    const ExperimentConfig cfg = small_config();
    const EvalReport a = run_experiment(cfg);
    const EvalReport b = run_experiment(cfg);
    REQUIRE_EQ(a.folds.size(), b.folds.size());
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
        CHECK_EQ(a.folds[f].test_rows, b.folds[f].test_rows);
        REQUIRE_EQ(a.folds[f].methods.size(), b.folds[f].methods.size());
        for (std::size_t m = 0; m < a.folds[f].methods.size(); ++m) {
            const MethodResult& ma = a.folds[f].methods[m];
            const MethodResult& mb = b.folds[f].methods[m];
            REQUIRE_EQ(ma.predictions.size(), mb.predictions.size());
            for (std::size_t i = 0; i < ma.predictions.size(); ++i)
                CHECK_EQ(ma.predictions[i].index(), mb.predictions[i].index());
            CHECK_EQ(ma.st.accuracy, mb.st.accuracy);
            CHECK_EQ(ma.st.dc, mb.st.dc);
        }
    }
}

TEST_CASE("kfold carves a holdout and partitions the pool") {
    const ExperimentConfig cfg = small_config(
        "split.mode = kfold\n"
        "split.k = 3\n"
        "split.holdout = 0.25\n"
        "methods = baseline, bdt\n");
    const EvalReport rep = run_experiment(cfg);
    const std::size_t n = rep.data.size();
    CHECK_EQ(rep.holdout_rows.size(), n / 4);
    REQUIRE_EQ(rep.folds.size(), 3);

    std::set<std::size_t> holdout(rep.holdout_rows.begin(), rep.holdout_rows.end());
    std::set<std::size_t> pool_seen;
    for (const FoldResult& fr : rep.folds) {
        CHECK(fr.validation_rows.empty());
        std::set<std::size_t> fold_rows;
        for (std::size_t r : fr.train_rows) CHECK(fold_rows.insert(r).second);
        for (std::size_t r : fr.test_rows) {
            CHECK(fold_rows.insert(r).second);
            CHECK(pool_seen.insert(r).second);  // test sets are disjoint across folds
            CHECK_EQ(holdout.count(r), 0);
        }
        CHECK_EQ(fold_rows.size(), n - holdout.size());
        for (std::size_t r : fr.train_rows) CHECK_EQ(holdout.count(r), 0);
    }
    CHECK_EQ(pool_seen.size(), n - holdout.size());
    bool noted = false;
    for (const std::string& w : rep.warnings)
        if (w.find("holdout") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("temporal split respects the cutoff") {
    const ExperimentConfig cfg = small_config(
        "split.mode = temporal\n"
        "split.cutoff = 2011Q2\n"
        "methods = baseline, rf\n");
    const EvalReport rep = run_experiment(cfg);
    REQUIRE_EQ(rep.folds.size(), 1);
    const Period cutoff = parse_period("2011Q2");
    for (std::size_t r : rep.folds[0].train_rows)
        CHECK_FALSE(cutoff < rep.data.observations[r].period);
    for (std::size_t r : rep.folds[0].test_rows)
        CHECK(cutoff < rep.data.observations[r].period);
    CHECK(rep.folds[0].validation_rows.empty());
}

TEST_CASE("stored preprocessor statistics come from the training rows alone") {
    const ExperimentConfig cfg = small_config("split.mode = kfold\nsplit.k = 3\nmethods = bdt\n");
    const EvalReport rep = run_experiment(cfg);
    for (const FoldResult& fr : rep.folds) {
        const Preprocessor refit = fit_preprocessor(rep.data.subset(fr.train_rows));
        CHECK_EQ(refit.impute, fr.pre.impute);
        CHECK_EQ(refit.mean, fr.pre.mean);
        CHECK_EQ(refit.sd, fr.pre.sd);
        CHECK_EQ(refit.all_missing, fr.pre.all_missing);
    }
}

TEST_CASE("saved pipelines score a raw dataset like the in-memory run") {
    const ExperimentConfig cfg = small_config("methods = bdt, mlp\n");
    const EvalReport rep = run_experiment(cfg);
    const FoldResult& fr = rep.folds[0];
    const Dataset test = rep.data.subset(fr.test_rows);
    for (std::size_t m = 0; m < rep.models.size(); ++m) {
        const std::vector<Rating> again = predict_dataset(rep.models[m], test);
        REQUIRE_EQ(again.size(), fr.methods[m].predictions.size());
        for (std::size_t i = 0; i < again.size(); ++i)
            CHECK_EQ(again[i], fr.methods[m].predictions[i]);
    }
}

TEST_CASE("predict_dataset rejects mismatched scales and features") {
    const ExperimentConfig cfg = small_config("methods = bdt\n");
    const EvalReport rep = run_experiment(cfg);
    Dataset other = rep.data;
    other.scale = make_scale("coarse", {"hi", "mid", "lo"});
    for (auto& o : other.observations) {
        o.rating = Rating(1, other.scale);
        o.prev_rating.reset();
    }
    CHECK_THROWS_AS(predict_dataset(rep.models[0], other), ScaleMismatchError);

    Dataset renamed = rep.data;
    renamed.feature_names[0] = "different";
    CHECK_THROWS_AS(predict_dataset(rep.models[0], renamed), DimensionMismatchError);
}

TEST_CASE("write_report emits the documented tables") {
    const ExperimentConfig cfg = small_config("methods = baseline, bdt\n");
    const EvalReport rep = run_experiment(cfg);
    TempDir dir("runner_report_dir");
    write_report(rep, dir.path.string());

    const std::string metrics = slurp(dir.path / "report_metrics.csv");
    CHECK_EQ(first_line(metrics), "fold,method,n_test,accuracy,dc,adc,sd");
    CHECK_EQ(first_line(slurp(dir.path / "report_buckets.csv")),
             "fold,method,zero,one_abs,gt_one_abs");
    CHECK_EQ(first_line(slurp(dir.path / "report_conditional.csv")),
             "fold,method,n_miss,cond_dc,cond_sd,cond_adc");
    CHECK_EQ(first_line(slurp(dir.path / "captured_changes.csv")),
             "fold,method,n_changes,exact,direction");
    CHECK(std::filesystem::exists(dir.path / "run_meta.txt"));
    CHECK(std::filesystem::exists(dir.path / "models" / "baseline.nbm"));
    CHECK(std::filesystem::exists(dir.path / "models" / "bdt.nbm"));
    CHECK(std::filesystem::exists(dir.path / "figures" / "rating_distribution.csv"));
    CHECK(std::filesystem::exists(dir.path / "figures" / "rating_distribution.svg"));

    // histogram counts cover every scored test row
    const std::string hist = slurp(dir.path / "notch_hist_bdt.csv");
    CHECK_EQ(first_line(hist), "notch,count,frequency");
    std::istringstream lines(hist);
    std::string line;
    std::getline(lines, line);
    std::size_t total = 0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        total += std::stoul(line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1));
    }
    CHECK_EQ(total, rep.folds[0].test_rows.size());

    // a second emission of the same report is byte-identical
    TempDir dir2("runner_report_dir2");
    write_report(rep, dir2.path.string());
    CHECK_EQ(metrics, slurp(dir2.path / "report_metrics.csv"));
    CHECK_EQ(slurp(dir.path / "report_buckets.csv"), slurp(dir2.path / "report_buckets.csv"));
    CHECK_EQ(slurp(dir.path / "captured_changes.csv"),
             slurp(dir2.path / "captured_changes.csv"));
}

TEST_CASE("agency comparison table uses the pinned header") {
    Dataset a;
    a.scale = default_sp_scale();
    a.feature_names = {};
    Dataset b = a;
    for (int i = 0; i < 4; ++i) {
        Observation o{"C1", Period{2020, 1 + i}, {}, Rating(5 + i, a.scale), std::nullopt};
        a.observations.push_back(o);
        o.rating = Rating(6 + i, b.scale);
        b.observations.push_back(o);
    }
    const AgencyComparison cmp = agency_comparison(a, b);
    const std::string csv = agency_comparison_csv("alpha_vs_beta", cmp);
    CHECK_EQ(first_line(csv), "pair,E,sd,E_abs,cond_E,cond_sd,cond_E_abs,n_joined");
    CHECK(csv.find("alpha_vs_beta") != std::string::npos);
}
