#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "notchbench/config.hpp"
#include "notchbench/dataset.hpp"
#include "notchbench/evaluation.hpp"
#include "notchbench/model_io.hpp"

namespace notchbench {

/// One method evaluated on one fold's test rows.
struct MethodResult {
    MethodKind kind = MethodKind::baseline;
    std::vector<Rating> predictions;  // aligned with the fold's test rows
    NotchDistribution dist;
    NotchStats st;
    BucketSummary buckets;
    /// Absent when no test row carries a rating change.
    std::optional<CapturedChanges> captured;
    /// Validation accuracy used for model selection; negative when the fold
    /// has no validation rows.
    double validation_accuracy = -1.0;
    /// Grid-search winner, e.g. "n_trees=200"; empty when no search ran.
    std::string chosen;
    double fit_seconds = 0.0;
    bool converged = true;  // SVM only; true for everything else
};

struct FoldResult {
    int fold = 0;
    std::vector<std::size_t> train_rows;  // sorted indices into the dataset
    std::vector<std::size_t> validation_rows;
    std::vector<std::size_t> test_rows;
    Preprocessor pre;  // fitted on this fold's train rows
    std::vector<MethodResult> methods;  // config order
};

struct EvalReport {
    ExperimentConfig config;
    std::string config_digest;
    Dataset data;
    std::vector<FoldResult> folds;
    /// Rows reserved by split.holdout in kfold mode; never trained or
    /// evaluated on.
    std::vector<std::size_t> holdout_rows;
    /// Fold-0 models, one per configured method.
    std::vector<SavedModel> models;
    std::vector<std::string> warnings;
};

/// The dataset a config describes: synthesized under the config's derived
/// synthesis seed, or loaded from data.csv. run_experiment starts from
/// exactly this.
Dataset materialize_dataset(const ExperimentConfig& cfg);

/// Builds or loads the dataset, splits it per the config, then trains and
/// evaluates every configured method on every fold. Preprocessing is refit on
/// each fold's train rows; the validation split (random mode only) drives MLP
/// early stopping and, when grid.enable is set, hyperparameter selection.
EvalReport run_experiment(const ExperimentConfig& cfg);

/// Counts summed over all folds of one method.
NotchDistribution pooled_distribution(const EvalReport& report, MethodKind kind);

/// Scores every row of d with a saved pipeline (preprocessor included).
/// The dataset must match the model's feature names and scale.
std::vector<Rating> predict_dataset(const SavedModel& m, const Dataset& d);

}  // namespace notchbench
