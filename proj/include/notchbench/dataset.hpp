#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "notchbench/rating_scale.hpp"

namespace notchbench {

/// Calendar quarter, totally ordered.
struct Period {
    int year = 0;
    int quarter = 1;  // 1..4

    Period prev() const {
        return quarter == 1 ? Period{year - 1, 4} : Period{year, quarter - 1};
    }
    Period next() const {
        return quarter == 4 ? Period{year + 1, 1} : Period{year, quarter + 1};
    }
    bool operator==(const Period& o) const { return year == o.year && quarter == o.quarter; }
    bool operator!=(const Period& o) const { return !(*this == o); }
    bool operator<(const Period& o) const {
        return year != o.year ? year < o.year : quarter < o.quarter;
    }
    bool operator<=(const Period& o) const { return *this < o || *this == o; }
    bool operator>(const Period& o) const { return o < *this; }
    bool operator>=(const Period& o) const { return o <= *this; }
};

/// Parses a "YYYYQn" token, e.g. "2018Q4". Throws ParseError.
Period parse_period(const std::string& token);
std::string to_string(const Period& p);

/// One company-quarter row. Missing feature values are stored as NaN.
struct Observation {
    std::string company_id;
    Period period;
    std::vector<double> features;
    Rating rating;
    std::optional<Rating> prev_rating;
};

struct Dataset {
    std::vector<Observation> observations;
    std::vector<std::string> feature_names;
    ScalePtr scale;
    std::string sector;

    std::size_t size() const { return observations.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
    /// New dataset holding the rows at `indices`, in that order.
    Dataset subset(const std::vector<std::size_t>& indices) const;
};

/// Per-feature imputation and z-score parameters fitted on training data.
struct Preprocessor {
    std::vector<double> impute;
    std::vector<double> mean;
    std::vector<double> sd;                 // floored at 1e-12
    std::vector<std::uint8_t> all_missing;  // 1 where a column had no values
    bool fitted = false;
};

/// Loads the CSV schema `company_id,period,rating,<feature...>`; empty feature
/// fields become missing markers and prev_rating is joined from the company's
/// prior quarter when that row is present in the same file.
Dataset load_csv(const std::string& path, const ScalePtr& scale);

/// Writes a dataset back out in the same CSV schema.
void save_csv(const Dataset& d, const std::string& path);

/// Imputation value = per-feature median of the non-missing training values;
/// mean and (population) standard deviation are computed after imputation.
/// Columns with no values at all impute 0 and set the all_missing flag.
Preprocessor fit_preprocessor(const Dataset& train);

/// Replaces missing values with the stored imputation values and z-scores
/// every feature with the stored mean/sd. The input is left unmodified.
Dataset apply_preprocessor(const Preprocessor& p, const Dataset& d);

struct SplitIndices3 {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};
struct Split3 {
    Dataset train;
    Dataset validation;
    Dataset test;
};

/// Shuffles row indices under `seed` and cuts them into train/validation/test.
/// Validation and test sizes are floor(fraction * n); the remainder goes to
/// train. Each part is returned sorted.
SplitIndices3 random_split_indices(std::size_t n, double f_train, double f_validation,
                                   double f_test, std::uint64_t seed);
Split3 random_split(const Dataset& d, double f_train, double f_validation, double f_test,
                    std::uint64_t seed);

struct Split2 {
    Dataset train;
    Dataset test;
};

/// train = rows with period <= cutoff, test = rows with period > cutoff.
/// Either side may come back empty.
Split2 temporal_split(const Dataset& d, const Period& cutoff);

struct FoldIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// k disjoint test folds covering all rows; the first n%k folds hold one extra
/// row. Fold membership is decided by a seeded shuffle; indices come back
/// sorted. Requires 2 <= k <= n.
std::vector<FoldIndices> kfold_indices(std::size_t n, int k, std::uint64_t seed);
std::vector<Split2> kfold(const Dataset& d, int k, std::uint64_t seed);

/// Most frequent rating; ties resolve to the better (smaller) index.
Rating majority_rating(const Dataset& d);

/// Predicts each row's previous-quarter rating, falling back to `fallback`
/// for rows without one.
std::vector<Rating> previous_rating_baseline(const Dataset& test, const Rating& fallback);

/// Synthetic-data description: rating paths follow a per-company Markov chain
/// (stay with probability `persistence`, otherwise move one notch up or down
/// with equal probability, clamped at the scale ends) and features are drawn
/// from per-rating Gaussian clusters.
struct SynthSpec {
    int companies = 50;
    int quarters = 40;
    double persistence = 0.9;
    /// Initial-rating weights, one per scale label; empty = uniform.
    std::vector<double> marginals;
    int n_features = 20;
    /// Leading features whose cluster mean moves with the rating; the rest are
    /// pure noise.
    int informative = 5;
    /// Gap between adjacent rating clusters, per informative feature.
    double separation = 1.0;
    double noise_sd = 1.0;
    Period start{2010, 1};
    std::string sector = "synthetic";
};

/// Generates a dataset per `spec`. Every emitted row has prev_rating: each
/// company's chain is warmed up one quarter before `spec.start`. Deterministic
/// under (spec, seed).
Dataset synthesize(const SynthSpec& spec, const ScalePtr& scale, std::uint64_t seed);

}  // namespace notchbench
