#pragma once

#include <string>

#include "notchbench/dataset.hpp"
#include "notchbench/ensemble.hpp"
#include "notchbench/mlp.hpp"
#include "notchbench/rating_scale.hpp"
#include "notchbench/svm.hpp"

namespace notchbench {

enum class MethodKind { baseline, bdt, rf, mlp, svm_ovo, svm_ova };

const char* method_name(MethodKind kind);
MethodKind method_from_name(const std::string& name);

/// A trained scoring pipeline: the rating scale, the training-fitted
/// preprocessor, and one method model. Carries everything prediction needs;
/// per-tree out-of-bag sets are not persisted.
struct SavedModel {
    MethodKind kind = MethodKind::baseline;
    ScalePtr scale;
    std::vector<std::string> feature_names;
    Preprocessor pre;

    Ensemble ensemble;          // bdt / rf
    MlpModel mlp;               // mlp
    MulticlassSvm svm;          // svm_ovo / svm_ova
    int baseline_fallback = 1;  // baseline: majority rating index of the training fold
};

/// Writes a versioned text container: magic line `NBMODELv1`, key=value
/// payload with doubles in hexfloat (lossless round-trip), and a trailing
/// 64-bit FNV-1a checksum line over everything above it.
void save_model(const SavedModel& m, const std::string& path);

/// Throws VersionMismatch for an NBMODEL file of another version,
/// CorruptModel for a bad checksum, truncation, or malformed payload, IoError
/// when the file cannot be read.
SavedModel load_model(const std::string& path);

/// Scores one preprocessed feature vector. For the baseline kind, callers
/// must provide prev (the row's previous-quarter rating index, 0 = absent).
int predict_saved(const SavedModel& m, const std::vector<double>& x, int prev = 0);

}  // namespace notchbench
