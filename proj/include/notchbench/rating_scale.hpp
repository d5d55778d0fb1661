#pragma once

#include <memory>
#include <string>
#include <vector>

namespace notchbench {

/// Ordered credit-rating scale, best label first. Positions are 1-based:
/// index 1 is the best rating, index size() the worst.
class RatingScale {
public:
    RatingScale(std::string name, std::vector<std::string> labels);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& labels() const { return labels_; }
    int size() const { return static_cast<int>(labels_.size()); }

    /// Label at 1-based position.
    const std::string& label_at(int index) const;
    /// 1-based position of a label, or 0 when absent.
    int index_of(const std::string& label) const;

    bool operator==(const RatingScale& other) const {
        return labels_ == other.labels_;
    }

private:
    std::string name_;
    std::vector<std::string> labels_;
};

using ScalePtr = std::shared_ptr<const RatingScale>;

/// One rating on a scale. Holds the 1-based notch position; the label is
/// recovered through the scale.
class Rating {
public:
    Rating(int index, ScalePtr scale);

    int index() const { return index_; }
    const std::string& label() const;
    const ScalePtr& scale() const { return scale_; }

    bool operator==(const Rating& other) const;
    bool operator!=(const Rating& other) const { return !(*this == other); }

private:
    int index_;
    ScalePtr scale_;
};

/// The 20-label S&P-style scale AAA .. CC.
ScalePtr default_sp_scale();

/// Scale built from a user-supplied ordered label list (best first).
ScalePtr make_scale(std::string name, std::vector<std::string> labels);

/// Look a label up on a scale; surrounding whitespace is ignored, matching is
/// case-sensitive. Throws UnknownLabelError when absent.
Rating parse_rating(const std::string& label, const ScalePtr& scale);

/// Signed notch distance pred.index - truth.index. Positive means the
/// prediction is worse than the truth. Throws ScaleMismatchError when the two
/// ratings live on different scales.
int notch_between(const Rating& pred, const Rating& truth);

}  // namespace notchbench
