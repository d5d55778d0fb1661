#include "notchbench/rating_scale.hpp"

#include <set>

#include "notchbench/errors.hpp"

namespace notchbench {

RatingScale::RatingScale(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
    if (labels_.empty())
        throw BadSpecError("rating scale needs at least one label");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty())
            throw BadSpecError("rating scale contains an empty label");
        if (!seen.insert(l).second)
            throw BadSpecError("rating scale label repeated: " + l);
    }
}

const std::string& RatingScale::label_at(int index) const {
    if (index < 1 || index > size())
        throw BadSpecError("rating index " + std::to_string(index) +
                           " outside 1.." + std::to_string(size()));
    return labels_[static_cast<std::size_t>(index - 1)];
}

int RatingScale::index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[static_cast<std::size_t>(i)] == label) return i + 1;
    return 0;
}

Rating::Rating(int index, ScalePtr scale) : index_(index), scale_(std::move(scale)) {
    if (!scale_) throw BadSpecError("rating constructed without a scale");
    scale_->label_at(index_);  // range check
}

const std::string& Rating::label() const { return scale_->label_at(index_); }

bool Rating::operator==(const Rating& other) const {
    return index_ == other.index_ && *scale_ == *other.scale_;
}

ScalePtr default_sp_scale() {
    static const ScalePtr scale = std::make_shared<RatingScale>(
        "sp20",
        std::vector<std::string>{"AAA", "AA+", "AA", "AA-", "A+", "A", "A-",
                                 "BBB+", "BBB", "BBB-", "BB+", "BB", "BB-",
                                 "B+", "B", "B-", "CCC+", "CCC", "CCC-", "CC"});
    return scale;
}

ScalePtr make_scale(std::string name, std::vector<std::string> labels) {
    return std::make_shared<RatingScale>(std::move(name), std::move(labels));
}

namespace {
std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
}  // namespace

Rating parse_rating(const std::string& label, const ScalePtr& scale) {
    const std::string t = trim(label);
    const int idx = scale->index_of(t);
    if (idx == 0)
        throw UnknownLabelError("unknown rating label \"" + t + "\" on scale " +
                                scale->name());
    return Rating(idx, scale);
}

int notch_between(const Rating& pred, const Rating& truth) {
    if (!(*pred.scale() == *truth.scale()))
        throw ScaleMismatchError("notch distance across different scales (" +
                                 pred.scale()->name() + " vs " +
                                 truth.scale()->name() + ")");
    return pred.index() - truth.index();
}

}  // namespace notchbench
