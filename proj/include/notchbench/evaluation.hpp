#pragma once

#include <map>
#include <optional>
#include <vector>

#include "notchbench/dataset.hpp"
#include "notchbench/rating_scale.hpp"

namespace notchbench {

/// Empirical distribution of the notch distance Y = predicted index - true
/// index. Counts are kept as integers; F(i) = count_i / N.
struct NotchDistribution {
    std::map<int, long long> counts;
    long long n = 0;

    double frequency(int i) const {
        auto it = counts.find(i);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
    }
};

struct NotchStats {
    double accuracy = 0.0;  // F(0)
    double dc = 0.0;        // E[Y]
    double adc = 0.0;       // E[|Y|]
    double sd = 0.0;
    // Moments of Y restricted to Y != 0; absent when every prediction is exact.
    std::optional<double> cond_dc;
    std::optional<double> cond_sd;
    std::optional<double> cond_adc;
};

struct BucketSummary {
    double zero = 0.0;
    double one_abs = 0.0;
    double gt_one_abs = 0.0;
};

struct CapturedChanges {
    /// Fraction of changed quarters where the prediction matched the new
    /// rating exactly.
    double exact = 0.0;
    /// Softer reading: prediction moved off prev_rating in the same direction
    /// as the true change.
    double direction = 0.0;
    long long n_changes = 0;
};

struct AgencyComparison {
    NotchStats stats;
    NotchDistribution dist;
    long long n_joined = 0;
};

NotchDistribution notch_distribution(const std::vector<Rating>& preds,
                                     const std::vector<Rating>& truths);

NotchStats stats(const NotchDistribution& d);

BucketSummary bucket_summary(const NotchDistribution& d);

/// Evaluates predictions on the rows whose rating changed from the previous
/// quarter (prev_rating present and different). Throws NoChanges when no such
/// row exists.
CapturedChanges captured_changes(const std::vector<Rating>& preds,
                                 const std::vector<Rating>& truths,
                                 const std::vector<std::optional<Rating>>& prev_ratings);

/// Inner-joins the two streams on (company_id, period), treats a as the
/// prediction and b as the truth, and computes notch statistics of the joined
/// pairs. Both streams must share one scale.
AgencyComparison agency_comparison(const Dataset& stream_a, const Dataset& stream_b);

}  // namespace notchbench
