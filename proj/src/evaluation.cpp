#include "notchbench/evaluation.hpp"

#include <cmath>
#include <string>

#include "notchbench/errors.hpp"

namespace notchbench {

NotchDistribution notch_distribution(const std::vector<Rating>& preds,
                                     const std::vector<Rating>& truths) {
    if (preds.size() != truths.size())
        throw LengthMismatchError("got " + std::to_string(preds.size()) + " predictions for " +
                                  std::to_string(truths.size()) + " truths");
    if (preds.empty()) throw EmptyError("notch distribution of zero observations");
    NotchDistribution d;
    d.n = static_cast<long long>(preds.size());
    for (std::size_t k = 0; k < preds.size(); ++k)
        ++d.counts[notch_between(preds[k], truths[k])];
    return d;
}

NotchStats stats(const NotchDistribution& d) {
    if (d.n < 1) throw EmptyError("statistics of an empty notch distribution");
    const double n = static_cast<double>(d.n);
    double dc = 0.0, adc = 0.0, second = 0.0;
    long long zero_count = 0;
    for (const auto& [i, c] : d.counts) {
        const double f = static_cast<double>(c) / n;
        dc += i * f;
        adc += std::abs(i) * f;
        second += static_cast<double>(i) * i * f;
        if (i == 0) zero_count = c;
    }
    NotchStats s;
    s.accuracy = static_cast<double>(zero_count) / n;
    s.dc = dc;
    s.adc = adc;
    s.sd = std::sqrt(std::max(0.0, second - dc * dc));

    const long long miss = d.n - zero_count;
    if (miss > 0) {
        const double mass = static_cast<double>(miss) / n;
        double cdc = 0.0, cadc = 0.0, csecond = 0.0;
        for (const auto& [i, c] : d.counts) {
            if (i == 0) continue;
            const double f = static_cast<double>(c) / n / mass;
            cdc += i * f;
            cadc += std::abs(i) * f;
            csecond += static_cast<double>(i) * i * f;
        }
        s.cond_dc = cdc;
        s.cond_adc = cadc;
        s.cond_sd = std::sqrt(std::max(0.0, csecond - cdc * cdc));
    }
    return s;
}

BucketSummary bucket_summary(const NotchDistribution& d) {
    if (d.n < 1) throw EmptyError("bucket summary of an empty notch distribution");
    long long zero = 0, one = 0;
    for (const auto& [i, c] : d.counts) {
        if (i == 0)
            zero += c;
        else if (i == 1 || i == -1)
            one += c;
    }
    const double n = static_cast<double>(d.n);
    BucketSummary b;
    b.zero = static_cast<double>(zero) / n;
    b.one_abs = static_cast<double>(one) / n;
    b.gt_one_abs = static_cast<double>(d.n - zero - one) / n;
    return b;
}

CapturedChanges captured_changes(const std::vector<Rating>& preds,
                                 const std::vector<Rating>& truths,
                                 const std::vector<std::optional<Rating>>& prev_ratings) {
    if (preds.size() != truths.size() || preds.size() != prev_ratings.size())
        throw LengthMismatchError("captured_changes needs equal-length inputs");
    long long changes = 0, exact = 0, direction = 0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        if (!prev_ratings[k]) continue;
        const Rating& prev = *prev_ratings[k];
        if (truths[k] == prev) continue;
        ++changes;
        if (preds[k] == truths[k]) ++exact;
        const int true_move = notch_between(truths[k], prev);
        const int pred_move = notch_between(preds[k], prev);
        if (pred_move != 0 && (pred_move > 0) == (true_move > 0)) ++direction;
    }
    if (changes == 0) throw NoChangesError("no observation has a rating change");
    CapturedChanges c;
    c.exact = static_cast<double>(exact) / static_cast<double>(changes);
    c.direction = static_cast<double>(direction) / static_cast<double>(changes);
    c.n_changes = changes;
    return c;
}

AgencyComparison agency_comparison(const Dataset& stream_a, const Dataset& stream_b) {
    if (!(*stream_a.scale == *stream_b.scale))
        throw ScaleMismatchError("agency streams use different scales");
    std::map<std::pair<std::string, Period>, Rating> b_of;
    for (const auto& obs : stream_b.observations)
        b_of.emplace(std::make_pair(obs.company_id, obs.period), obs.rating);

    std::vector<Rating> preds, truths;
    for (const auto& obs : stream_a.observations) {
        auto it = b_of.find(std::make_pair(obs.company_id, obs.period));
        if (it == b_of.end()) continue;
        preds.push_back(obs.rating);
        truths.push_back(it->second);
    }
    if (preds.empty()) throw EmptyJoinError("the two streams share no (company_id, period)");

    AgencyComparison cmp;
    cmp.dist = notch_distribution(preds, truths);
    cmp.stats = stats(cmp.dist);
    cmp.n_joined = static_cast<long long>(preds.size());
    return cmp;
}

}  // namespace notchbench
