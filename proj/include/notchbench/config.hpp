#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "notchbench/dataset.hpp"
#include "notchbench/model_io.hpp"

namespace notchbench {

enum class SplitMode { random, temporal, kfold };

/// Experiment description parsed from a flat key=value file (# starts a
/// comment; keys use section prefixes like rf.n_trees or split.mode).
/// Unknown and duplicate keys are rejected.
struct ExperimentConfig {
    // data
    bool synthetic = true;
    std::string csv_path;
    std::string scale_name = "sp20";
    std::vector<std::string> scale_labels;  // empty = the default 20-label scale
    SynthSpec synth;

    // split
    SplitMode split_mode = SplitMode::random;
    double f_train = 0.7;
    double f_validation = 0.1;
    double f_test = 0.2;
    std::string cutoff;      // temporal mode, YYYYQn
    int k = 10;              // kfold mode
    double holdout = 0.2;    // kfold mode: test fraction kept out of the fold pool

    // run
    std::vector<MethodKind> methods = {MethodKind::baseline, MethodKind::bdt, MethodKind::rf,
                                       MethodKind::mlp,      MethodKind::svm_ovo,
                                       MethodKind::svm_ova};
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    bool parallel = true;
    bool grid = false;

    // per-method hyperparameters
    struct {
        int n_trees = 100;
        std::size_t sample_size = 0;  // 0 = training size
        int min_samples_split = 2;
        int max_depth = 0;
    } bdt;
    struct {
        int n_trees = 100;
        int mtry = 0;  // 0 = ceil(sqrt(p))
        std::size_t sample_size = 0;
        int min_samples_split = 2;
        int max_depth = 0;
    } rf;
    struct {
        int hidden = 32;
        double eta = 0.1;
        int epochs = 500;
        int patience = 25;
    } mlp;
    struct {
        double c = 1.0;
        std::string kernel = "rbf";
        double gamma = 0.0;  // 0 = 1/p
        double coef0 = 0.0;
        int degree = 3;
        double tol = 1e-3;
        int max_passes = 1000;
    } svm;

    // report
    bool svg = true;
    std::string timeline_company;  // empty = first company in the data
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Every effective setting, one key=value per line, keys sorted; two configs
/// hash equal exactly when they run the same experiment.
std::string canonical_config_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

ScalePtr scale_from_config(const ExperimentConfig& cfg);
Kernel kernel_from_config(const ExperimentConfig& cfg, std::size_t n_features);

}  // namespace notchbench
