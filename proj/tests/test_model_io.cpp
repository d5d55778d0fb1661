#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "notchbench/errors.hpp"
#include "notchbench/model_io.hpp"
#include "notchbench/rng.hpp"
#include "notchbench/text.hpp"

using namespace notchbench;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }

    void write(const std::string& content) const {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    std::string read() const {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
};

struct Blobs {
    FeatureMatrix x;
    std::vector<int> y;
};

Blobs make_blobs(std::uint64_t seed) {
    Rng rng(seed);
    Blobs b;
    for (int i = 0; i < 60; ++i) {
        const int cls = 1 + i % 3;
        b.x.push_back({cls * 4.0 + rng.normal() * 0.3, rng.normal()});
        b.y.push_back(cls);
    }
    return b;
}

SavedModel shell(MethodKind kind) {
    SavedModel m;
    m.kind = kind;
    m.scale = default_sp_scale();
    m.feature_names = {"leverage", "coverage"};
    m.pre.fitted = true;
    m.pre.impute = {1.0 / 3.0, -7.25};
    m.pre.mean = {0.1, 2.0 / 7.0};
    m.pre.sd = {1.5, 1e-12};
    m.pre.all_missing = {0, 1};
    return m;
}

void check_common(const SavedModel& a, const SavedModel& b) {
    CHECK_EQ(a.kind, b.kind);
    CHECK(*a.scale == *b.scale);
    CHECK_EQ(a.feature_names, b.feature_names);
    CHECK_EQ(a.pre.fitted, b.pre.fitted);
    CHECK_EQ(a.pre.impute, b.pre.impute);
    CHECK_EQ(a.pre.mean, b.pre.mean);
    CHECK_EQ(a.pre.sd, b.pre.sd);
    CHECK_EQ(a.pre.all_missing, b.pre.all_missing);
}

FeatureMatrix probe_points(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    FeatureMatrix pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 14), rng.normal()});
    return pts;
}

}  // namespace

TEST_CASE("baseline model round-trips") {
    SavedModel m = shell(MethodKind::baseline);
    m.baseline_fallback = 7;
    TempFile f("io_baseline.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    check_common(m, r);
    CHECK_EQ(r.baseline_fallback, 7);
    CHECK_EQ(predict_saved(r, {0.0, 0.0}, 12), 12);
    CHECK_EQ(predict_saved(r, {0.0, 0.0}, 0), 7);
}

TEST_CASE("bagged ensemble round-trips with identical predictions") {
    const Blobs b = make_blobs(5);
    EnsembleParams p;
    p.n_trees = 5;
    p.sample_size = b.x.size();
    p.seed = 19;
    p.parallel = false;
    SavedModel m = shell(MethodKind::bdt);
    m.ensemble = fit_bagged(b.x, b.y, p);
    TempFile f("io_bdt.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    check_common(m, r);
    REQUIRE_EQ(r.ensemble.trees.size(), m.ensemble.trees.size());
    for (const auto& pt : probe_points(31, 40))
        CHECK_EQ(predict_saved(r, pt), predict_ensemble(m.ensemble, pt));
}

TEST_CASE("random forest round-trips with identical predictions") {
    const Blobs b = make_blobs(6);
    EnsembleParams p;
    p.n_trees = 7;
    p.sample_size = b.x.size();
    p.mtry = 1;
    p.seed = 20;
    p.parallel = false;
    SavedModel m = shell(MethodKind::rf);
    m.ensemble = fit_random_forest(b.x, b.y, p);
    TempFile f("io_rf.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    check_common(m, r);
    CHECK_EQ(r.ensemble.params.mtry, 1);
    for (const auto& pt : probe_points(32, 40))
        CHECK_EQ(predict_saved(r, pt), predict_ensemble(m.ensemble, pt));
}

TEST_CASE("mlp round-trips bitwise") {
    const Blobs b = make_blobs(7);
    MlpParams p;
    p.inputs = 2;
    p.hidden = 4;
    p.outputs = 3;
    p.epochs = 30;
    p.seed = 9;
    SavedModel m = shell(MethodKind::mlp);
    m.mlp = fit_mlp(b.x, b.y, {}, {}, p);
    TempFile f("io_mlp.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    check_common(m, r);
    CHECK_EQ(pack_parameters(r.mlp), pack_parameters(m.mlp));  // hexfloat is lossless
    for (const auto& pt : probe_points(33, 20))
        CHECK_EQ(predict_saved(r, pt), predict_mlp(m.mlp, pt));
}

TEST_CASE("multiclass svm round-trips bitwise") {
    const Blobs b = make_blobs(8);
    SavedModel m = shell(MethodKind::svm_ovo);
    m.svm = fit_ovo(b.x, b.y, 2.0, Kernel::rbf(0.5), 1e-3, 400, false);
    TempFile f("io_svm.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    check_common(m, r);
    CHECK_EQ(r.svm.classes, m.svm.classes);
    REQUIRE_EQ(r.svm.models.size(), m.svm.models.size());
    for (std::size_t i = 0; i < m.svm.models.size(); ++i) {
        CHECK_EQ(r.svm.models[i].pos_class, m.svm.models[i].pos_class);
        CHECK_EQ(r.svm.models[i].model.alpha, m.svm.models[i].model.alpha);
        CHECK_EQ(r.svm.models[i].model.bias, m.svm.models[i].model.bias);
        CHECK_EQ(r.svm.models[i].model.support_rows, m.svm.models[i].model.support_rows);
        CHECK_EQ(r.svm.models[i].model.support_x, m.svm.models[i].model.support_x);
    }
    for (const auto& pt : probe_points(34, 40))
        CHECK_EQ(predict_saved(r, pt), predict_svm(m.svm, pt));
}

TEST_CASE("constant svm submodel survives the round-trip") {
    SavedModel m = shell(MethodKind::svm_ova);
    m.svm.mode = SvmMode::one_vs_all;
    m.svm.classes = {4};
    m.svm.kernel = Kernel::linear();
    SvmSubmodel sub;
    sub.pos_class = 4;
    sub.neg_class = 0;
    sub.model.constant = true;
    sub.model.constant_value = -1.0;
    sub.model.kernel = Kernel::linear();
    m.svm.models.push_back(sub);
    TempFile f("io_const.nbm");
    save_model(m, f.path);
    const SavedModel r = load_model(f.path);
    REQUIRE_EQ(r.svm.models.size(), 1);
    CHECK(r.svm.models[0].model.constant);
    CHECK_EQ(r.svm.models[0].model.constant_value, -1.0);
    CHECK_EQ(decision_value(r.svm.models[0].model, {5.0, 5.0}), -1.0);
}

TEST_CASE("load failure modes") {
    CHECK_THROWS_AS(load_model("io_no_such_file.nbm"), IoError);

    TempFile text("io_text.nbm");
    text.write("hello\nworld\n");
    CHECK_THROWS_AS(load_model(text.path), CorruptModelError);

    SavedModel m = shell(MethodKind::baseline);
    TempFile good("io_good.nbm");
    save_model(m, good.path);
    const std::string content = good.read();

    TempFile wrong_version("io_version.nbm");
    wrong_version.write("NBMODELv9" + content.substr(9));
    CHECK_THROWS_AS(load_model(wrong_version.path), VersionMismatchError);

    TempFile truncated("io_trunc.nbm");
    truncated.write(content.substr(0, content.size() / 2));
    CHECK_THROWS_AS(load_model(truncated.path), CorruptModelError);

    TempFile corrupt("io_corrupt.nbm");
    std::string flipped = content;
    const std::size_t digit = flipped.rfind("checksum=") + 9;
    flipped[digit] = flipped[digit] == '0' ? '1' : '0';
    corrupt.write(flipped);
    CHECK_THROWS_AS(load_model(corrupt.path), CorruptModelError);

    // valid checksum over an unparseable payload still fails, after the check
    const std::string bad_payload = "NBMODELv1\nno equals sign here\n";
    TempFile malformed("io_malformed.nbm");
    malformed.write(bad_payload + "checksum=" + fnv1a64_hex(bad_payload) + "\n");
    CHECK_THROWS_AS(load_model(malformed.path), CorruptModelError);
}
