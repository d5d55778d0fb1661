#include "notchbench/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "notchbench/ensemble.hpp"
#include "notchbench/errors.hpp"
#include "notchbench/mlp.hpp"
#include "notchbench/rng.hpp"
#include "notchbench/svm.hpp"
#include "notchbench/text.hpp"

namespace notchbench {

namespace {

// Non-overlapping deterministic seed streams off the master seed: 1 = split
// shuffle, 2 = synthesis, 3 = fold assignment, 100 + fold*16 + method = one
// stream per fold/method pair.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return Rng::derive(master, stream).next_u64();
}

FeatureMatrix features_of(const Dataset& d) {
    FeatureMatrix x;
    x.reserve(d.size());
    for (const auto& obs : d.observations) x.push_back(obs.features);
    return x;
}

std::vector<int> labels_of(const Dataset& d) {
    std::vector<int> y;
    y.reserve(d.size());
    for (const auto& obs : d.observations) y.push_back(obs.rating.index());
    return y;
}

double accuracy_of(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.empty() || pred.size() != truth.size()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

struct FoldPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

std::vector<FoldPlan> plan_folds(const ExperimentConfig& cfg, const Dataset& data,
                                 std::vector<std::size_t>& holdout,
                                 std::vector<std::string>& warnings) {
    const std::size_t n = data.size();
    std::vector<FoldPlan> plans;
    switch (cfg.split_mode) {
        case SplitMode::random: {
            const auto s = random_split_indices(n, cfg.f_train, cfg.f_validation, cfg.f_test,
                                                stream_seed(cfg.seed, 1));
            plans.push_back({s.train, s.validation, s.test});
            break;
        }
        case SplitMode::temporal: {
            const Period cutoff = parse_period(cfg.cutoff);
            FoldPlan p;
            for (std::size_t i = 0; i < n; ++i) {
                if (data.observations[i].period <= cutoff)
                    p.train.push_back(i);
                else
                    p.test.push_back(i);
            }
            if (p.train.empty() || p.test.empty())
                throw EmptyDatasetError("temporal cutoff " + cfg.cutoff +
                                        " leaves an empty train or test side");
            plans.push_back(std::move(p));
            break;
        }
        case SplitMode::kfold: {
            std::vector<std::size_t> pool;
            if (cfg.holdout > 0.0) {
                const auto s = random_split_indices(n, 1.0 - cfg.holdout, 0.0, cfg.holdout,
                                                    stream_seed(cfg.seed, 1));
                pool = s.train;
                holdout = s.test;
                warnings.push_back(std::to_string(holdout.size()) +
                                   " rows reserved as an untouched holdout set");
            } else {
                pool.resize(n);
                for (std::size_t i = 0; i < n; ++i) pool[i] = i;
            }
            for (const auto& f : kfold_indices(pool.size(), cfg.k, stream_seed(cfg.seed, 3))) {
                FoldPlan p;
                p.train.reserve(f.train.size());
                p.test.reserve(f.test.size());
                for (auto i : f.train) p.train.push_back(pool[i]);
                for (auto i : f.test) p.test.push_back(pool[i]);
                plans.push_back(std::move(p));
            }
            break;
        }
    }
    return plans;
}

struct FoldContext {
    const ExperimentConfig& cfg;
    const ScalePtr& scale;
    const Dataset& train_raw;  // pre-standardization rows (prev ratings, majority)
    const Dataset& validation_raw;
    const Dataset& test_raw;
    const FeatureMatrix& xtr;
    const FeatureMatrix& xva;
    const FeatureMatrix& xte;
    const std::vector<int>& ytr;
    const std::vector<int>& yva;
    bool grid_active = false;
    int fold = 0;
};

struct TrainOut {
    std::vector<int> test_pred;
    double val_acc = -1.0;
    std::string chosen;
    bool converged = true;
};

TrainOut run_baseline(const FoldContext& ctx, SavedModel& sm) {
    TrainOut out;
    const Rating fallback = majority_rating(ctx.train_raw);
    sm.baseline_fallback = fallback.index();
    for (const auto& r : previous_rating_baseline(ctx.test_raw, fallback))
        out.test_pred.push_back(r.index());
    if (ctx.validation_raw.size() > 0) {
        std::vector<int> pv;
        for (const auto& r : previous_rating_baseline(ctx.validation_raw, fallback))
            pv.push_back(r.index());
        out.val_acc = accuracy_of(pv, labels_of(ctx.validation_raw));
    }
    return out;
}

Ensemble fit_one_ensemble(const FoldContext& ctx, MethodKind kind, int n_trees,
                          std::uint64_t seed) {
    EnsembleParams p;
    p.n_trees = n_trees;
    p.seed = seed;
    p.parallel = ctx.cfg.parallel;
    if (kind == MethodKind::bdt) {
        p.sample_size = ctx.cfg.bdt.sample_size;
        p.tree.min_samples_split = ctx.cfg.bdt.min_samples_split;
        p.tree.max_depth = ctx.cfg.bdt.max_depth;
        return fit_bagged(ctx.xtr, ctx.ytr, p);
    }
    p.sample_size = ctx.cfg.rf.sample_size;
    p.tree.min_samples_split = ctx.cfg.rf.min_samples_split;
    p.tree.max_depth = ctx.cfg.rf.max_depth;
    p.mtry = ctx.cfg.rf.mtry > 0 ? ctx.cfg.rf.mtry
                                 : default_mtry(ctx.xtr.empty() ? 0 : ctx.xtr[0].size());
    return fit_random_forest(ctx.xtr, ctx.ytr, p);
}

TrainOut run_ensemble(const FoldContext& ctx, MethodKind kind, std::uint64_t seed,
                      SavedModel& sm) {
    TrainOut out;
    std::vector<int> sizes = {kind == MethodKind::bdt ? ctx.cfg.bdt.n_trees
                                                      : ctx.cfg.rf.n_trees};
    if (ctx.grid_active) sizes = {50, 100, 200};

    Ensemble best;
    bool have = false;
    for (int b : sizes) {
        Ensemble e = fit_one_ensemble(ctx, kind, b, seed);
        double acc = -1.0;
        if (!ctx.xva.empty())
            acc = accuracy_of(predict_ensemble_batch(e, ctx.xva, ctx.cfg.parallel), ctx.yva);
        if (!have || acc > out.val_acc) {
            have = true;
            out.val_acc = acc;
            best = std::move(e);
            if (ctx.grid_active) out.chosen = "n_trees=" + std::to_string(b);
        }
    }
    out.test_pred = predict_ensemble_batch(best, ctx.xte, ctx.cfg.parallel);
    sm.ensemble = std::move(best);
    return out;
}

TrainOut run_mlp(const FoldContext& ctx, std::uint64_t seed, SavedModel& sm) {
    TrainOut out;
    MlpParams p;
    p.inputs = static_cast<int>(ctx.xtr.empty() ? 0 : ctx.xtr[0].size());
    p.hidden = ctx.cfg.mlp.hidden;
    p.outputs = static_cast<int>(ctx.scale->size());
    p.eta = ctx.cfg.mlp.eta;
    p.epochs = ctx.cfg.mlp.epochs;
    p.patience = ctx.cfg.mlp.patience;
    p.seed = seed;
    MlpModel m = fit_mlp(ctx.xtr, ctx.ytr, ctx.xva, ctx.yva, p);
    if (!ctx.xva.empty())
        out.val_acc = accuracy_of(predict_mlp_batch(m, ctx.xva, ctx.cfg.parallel), ctx.yva);
    out.test_pred = predict_mlp_batch(m, ctx.xte, ctx.cfg.parallel);
    sm.mlp = std::move(m);
    return out;
}

MulticlassSvm fit_one_svm(const FoldContext& ctx, MethodKind kind, double c, const Kernel& k) {
    if (kind == MethodKind::svm_ovo)
        return fit_ovo(ctx.xtr, ctx.ytr, c, k, ctx.cfg.svm.tol, ctx.cfg.svm.max_passes,
                       ctx.cfg.parallel);
    return fit_ova(ctx.xtr, ctx.ytr, c, k, ctx.cfg.svm.tol, ctx.cfg.svm.max_passes,
                   ctx.cfg.parallel);
}

TrainOut run_svm(const FoldContext& ctx, MethodKind kind, SavedModel& sm,
                 std::vector<std::string>& warnings) {
    TrainOut out;
    const std::size_t p = ctx.xtr.empty() ? 1 : ctx.xtr[0].size();
    const Kernel base = kernel_from_config(ctx.cfg, p);

    std::vector<double> cs = {ctx.cfg.svm.c};
    std::vector<double> gammas = {base.gamma};
    if (ctx.grid_active) {
        cs = {0.1, 1.0, 10.0};
        if (base.type != Kernel::Type::linear) {
            const double unit = 1.0 / static_cast<double>(p);
            gammas = {0.1 * unit, unit, 10.0 * unit};
        }
    }

    MulticlassSvm best;
    bool have = false;
    for (double c : cs) {
        for (double g : gammas) {
            Kernel k = base;
            k.gamma = g;
            MulticlassSvm m = fit_one_svm(ctx, kind, c, k);
            double acc = -1.0;
            if (!ctx.xva.empty())
                acc = accuracy_of(predict_svm_batch(m, ctx.xva, ctx.cfg.parallel), ctx.yva);
            if (!have || acc > out.val_acc) {
                have = true;
                out.val_acc = acc;
                best = std::move(m);
                if (ctx.grid_active) {
                    out.chosen = "c=" + fmt_double(c);
                    if (base.type != Kernel::Type::linear)
                        out.chosen += ",gamma=" + fmt_double(g);
                }
            }
        }
    }

    long long stuck = 0;
    for (const auto& sub : best.models)
        if (!sub.model.converged) ++stuck;
    if (stuck > 0) {
        out.converged = false;
        warnings.push_back("fold " + std::to_string(ctx.fold) + " " + method_name(kind) + ": " +
                           std::to_string(stuck) + " of " + std::to_string(best.models.size()) +
                           " binary models hit the pass limit");
    }

    out.test_pred = predict_svm_batch(best, ctx.xte, ctx.cfg.parallel);
    sm.svm = std::move(best);
    return out;
}

TrainOut train_and_predict(const FoldContext& ctx, MethodKind kind, std::uint64_t seed,
                           SavedModel& sm, std::vector<std::string>& warnings) {
    switch (kind) {
        case MethodKind::baseline: return run_baseline(ctx, sm);
        case MethodKind::bdt:
        case MethodKind::rf: return run_ensemble(ctx, kind, seed, sm);
        case MethodKind::mlp: return run_mlp(ctx, seed, sm);
        case MethodKind::svm_ovo:
        case MethodKind::svm_ova: return run_svm(ctx, kind, sm, warnings);
    }
    throw BadParamsError("unknown method kind");
}

}  // namespace

Dataset materialize_dataset(const ExperimentConfig& cfg) {
    const ScalePtr scale = scale_from_config(cfg);
    return cfg.synthetic ? synthesize(cfg.synth, scale, stream_seed(cfg.seed, 2))
                         : load_csv(cfg.csv_path, scale);
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
    EvalReport rep;
    rep.config = cfg;
    rep.config_digest = config_hash(cfg);

    const ScalePtr scale = scale_from_config(cfg);
    rep.data = materialize_dataset(cfg);
    if (rep.data.size() == 0) throw EmptyDatasetError("no rows to run on");

    const auto plans = plan_folds(cfg, rep.data, rep.holdout_rows, rep.warnings);

    bool grid_active = cfg.grid && cfg.split_mode == SplitMode::random &&
                       !plans.empty() && !plans[0].validation.empty();
    if (cfg.grid && !grid_active)
        rep.warnings.push_back("grid search skipped: this run has no validation split");

    for (std::size_t f = 0; f < plans.size(); ++f) {
        const auto& plan = plans[f];
        FoldResult fr;
        fr.fold = static_cast<int>(f);
        fr.train_rows = plan.train;
        fr.validation_rows = plan.validation;
        fr.test_rows = plan.test;

        const Dataset train_raw = rep.data.subset(plan.train);
        const Dataset validation_raw = rep.data.subset(plan.validation);
        const Dataset test_raw = rep.data.subset(plan.test);
        if (test_raw.size() == 0)
            throw EmptyDatasetError("fold " + std::to_string(f) + " has no test rows");

        fr.pre = fit_preprocessor(train_raw);
        const Dataset train_std = apply_preprocessor(fr.pre, train_raw);
        const Dataset validation_std = apply_preprocessor(fr.pre, validation_raw);
        const Dataset test_std = apply_preprocessor(fr.pre, test_raw);

        const FeatureMatrix xtr = features_of(train_std);
        const FeatureMatrix xva = features_of(validation_std);
        const FeatureMatrix xte = features_of(test_std);
        const std::vector<int> ytr = labels_of(train_std);
        const std::vector<int> yva = labels_of(validation_std);

        const FoldContext ctx{cfg,         scale, train_raw, validation_raw, test_raw,
                              xtr,         xva,   xte,       ytr,            yva,
                              grid_active, static_cast<int>(f)};

        std::vector<Rating> truths;
        std::vector<std::optional<Rating>> prevs;
        for (const auto& obs : test_raw.observations) {
            truths.push_back(obs.rating);
            prevs.push_back(obs.prev_rating);
        }

        for (const MethodKind kind : cfg.methods) {
            SavedModel sm;
            sm.kind = kind;
            sm.scale = scale;
            sm.feature_names = rep.data.feature_names;
            sm.pre = fr.pre;

            const std::uint64_t seed =
                stream_seed(cfg.seed, 100 + f * 16 + static_cast<std::uint64_t>(kind));
            const auto t0 = std::chrono::steady_clock::now();
            TrainOut t = train_and_predict(ctx, kind, seed, sm, rep.warnings);
            const auto t1 = std::chrono::steady_clock::now();

            MethodResult mr;
            mr.kind = kind;
            mr.validation_accuracy = t.val_acc;
            mr.chosen = std::move(t.chosen);
            mr.converged = t.converged;
            mr.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
            mr.predictions.reserve(t.test_pred.size());
            for (int idx : t.test_pred) mr.predictions.emplace_back(idx, scale);

            mr.dist = notch_distribution(mr.predictions, truths);
            mr.st = stats(mr.dist);
            mr.buckets = bucket_summary(mr.dist);
            try {
                mr.captured = captured_changes(mr.predictions, truths, prevs);
            } catch (const NoChangesError&) {
                mr.captured.reset();
            }

            fr.methods.push_back(std::move(mr));
            if (f == 0) rep.models.push_back(std::move(sm));
        }
        rep.folds.push_back(std::move(fr));
    }
    return rep;
}

NotchDistribution pooled_distribution(const EvalReport& report, MethodKind kind) {
    NotchDistribution pooled;
    for (const auto& fr : report.folds)
        for (const auto& mr : fr.methods)
            if (mr.kind == kind) {
                for (const auto& [i, c] : mr.dist.counts) pooled.counts[i] += c;
                pooled.n += mr.dist.n;
            }
    return pooled;
}

std::vector<Rating> predict_dataset(const SavedModel& m, const Dataset& d) {
    if (!m.scale || !d.scale) throw BadParamsError("model and dataset need a rating scale");
    if (!(*m.scale == *d.scale))
        throw ScaleMismatchError("model scale " + m.scale->name() + " does not match dataset scale " +
                                 d.scale->name());
    if (d.feature_names != m.feature_names)
        throw DimensionMismatchError("dataset feature columns do not match the model");

    const Dataset std_rows = apply_preprocessor(m.pre, d);
    std::vector<Rating> out;
    out.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& prev = d.observations[i].prev_rating;
        const int idx =
            predict_saved(m, std_rows.observations[i].features, prev ? prev->index() : 0);
        out.emplace_back(idx, m.scale);
    }
    return out;
}

}  // namespace notchbench
