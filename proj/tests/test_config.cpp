#include "doctest.h"

#include <string>

#include "notchbench/config.hpp"
#include "notchbench/errors.hpp"

using namespace notchbench;

TEST_CASE("empty text yields the defaults") {
    const ExperimentConfig cfg = parse_config_text("");
    CHECK(cfg.synthetic);
    CHECK_EQ(cfg.seed, 42);
    CHECK_EQ(cfg.methods.size(), 6);
    CHECK_EQ(cfg.split_mode, SplitMode::random);
    CHECK_EQ(cfg.f_train, 0.7);
    CHECK_EQ(cfg.scale_name, "sp20");
    CHECK_EQ(cfg.rf.mtry, 0);
    CHECK_EQ(cfg.svm.kernel, "rbf");
    CHECK(cfg.parallel);
    CHECK_FALSE(cfg.grid);
    CHECK_EQ(scale_from_config(cfg)->size(), 20);
}

TEST_CASE("full config parses with comments and blank lines") {
    const std::string text =
        "# experiment\n"
        "data.source = synth\n"
        "synth.companies = 12\n"
        "synth.quarters = 8\n"
        "synth.persistence = 0.85  # sticky ratings\n"
        "\n"
        "split.mode = kfold\n"
        "split.k = 4\n"
        "split.holdout = 0.25\n"
        "methods = baseline, rf, svm_ova\n"
        "seed = 7\n"
        "parallel = off\n"
        "grid.enable = true\n"
        "rf.n_trees = 31\n"
        "mlp.eta = 0.05\n"
        "svm.kernel = polynomial\n"
        "svm.degree = 2\n"
        "report.svg = no\n";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK_EQ(cfg.synth.companies, 12);
    CHECK_EQ(cfg.synth.persistence, 0.85);
    CHECK_EQ(cfg.split_mode, SplitMode::kfold);
    CHECK_EQ(cfg.k, 4);
    CHECK_EQ(cfg.holdout, 0.25);
    REQUIRE_EQ(cfg.methods.size(), 3);
    CHECK_EQ(cfg.methods[1], MethodKind::rf);
    CHECK_EQ(cfg.seed, 7);
    CHECK_FALSE(cfg.parallel);
    CHECK(cfg.grid);
    CHECK_EQ(cfg.rf.n_trees, 31);
    CHECK_EQ(cfg.mlp.eta, 0.05);
    CHECK_EQ(cfg.svm.degree, 2);
    CHECK_FALSE(cfg.svg);
}

TEST_CASE("canonical text is a fixpoint of parsing") {
    ExperimentConfig cfg = parse_config_text("seed = 99\nsplit.mode = temporal\nsplit.cutoff = 2014Q4\n");
    const std::string canon = canonical_config_text(cfg);
    const ExperimentConfig reparsed = parse_config_text(canon);
    CHECK_EQ(canonical_config_text(reparsed), canon);
    CHECK_EQ(config_hash(reparsed), config_hash(cfg));
}

TEST_CASE("hash tracks result-affecting settings only") {
    const ExperimentConfig base = parse_config_text("");
    CHECK_EQ(config_hash(parse_config_text("# a comment\n\n")), config_hash(base));
    CHECK_EQ(config_hash(parse_config_text("out = elsewhere\nreport.svg = false\n")),
             config_hash(base));
    CHECK_NE(config_hash(parse_config_text("seed = 43\n")), config_hash(base));
    CHECK_NE(config_hash(parse_config_text("rf.n_trees = 5\n")), config_hash(base));

    // key order in the source must not matter
    CHECK_EQ(config_hash(parse_config_text("seed = 5\nmlp.hidden = 8\n")),
             config_hash(parse_config_text("mlp.hidden = 8\nseed = 5\n")));
}

TEST_CASE("bad keys and values are rejected") {
    CHECK_THROWS_AS(parse_config_text("no.such.key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("seed = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("data.source = parquet\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("methods = bdt, bdt\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("methods = extrapolator\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("parallel = maybe\n"), ConfigError);
}

TEST_CASE("validation rejects inconsistent settings") {
    CHECK_THROWS_AS(parse_config_text("data.source = csv\n"), ConfigError);  // no path
    CHECK_THROWS_AS(parse_config_text("split.mode = temporal\n"), ConfigError);  // no cutoff
    CHECK_THROWS_AS(parse_config_text("split.mode = temporal\nsplit.cutoff = year9\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("split.mode = kfold\nsplit.k = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("split.mode = kfold\nsplit.holdout = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("split.train = 0.5\n"), ConfigError);  // sums to 0.8
    CHECK_THROWS_AS(parse_config_text("methods =\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("svm.kernel = quartic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("svm.c = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mlp.hidden = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("rf.n_trees = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mlp.eta = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("svm.tol = 0\n"), ConfigError);
}

TEST_CASE("custom scales come through scale_from_config") {
    const ExperimentConfig cfg =
        parse_config_text("scale.name = tiny\nscale.labels = good, ok, bad\n");
    const ScalePtr s = scale_from_config(cfg);
    CHECK_EQ(s->name(), "tiny");
    CHECK_EQ(s->size(), 3);
    CHECK_EQ(s->label_at(2), "ok");
}

TEST_CASE("kernel defaults derive gamma from the feature count") {
    ExperimentConfig cfg = parse_config_text("");
    Kernel k = kernel_from_config(cfg, 8);
    CHECK_EQ(k.type, Kernel::Type::rbf);
    CHECK_EQ(k.gamma, 0.125);

    cfg = parse_config_text("svm.gamma = 0.5\n");
    CHECK_EQ(kernel_from_config(cfg, 8).gamma, 0.5);

    cfg = parse_config_text("svm.kernel = linear\n");
    CHECK_EQ(kernel_from_config(cfg, 8).type, Kernel::Type::linear);

    cfg = parse_config_text("svm.kernel = sigmoid\nsvm.coef0 = 0.25\n");
    k = kernel_from_config(cfg, 4);
    CHECK_EQ(k.type, Kernel::Type::sigmoid);
    CHECK_EQ(k.coef0, 0.25);
}
