#include "notchbench/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "notchbench/errors.hpp"
#include "notchbench/rng.hpp"
#include "notchbench/text.hpp"

namespace notchbench {

namespace {
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_missing(double v) { return std::isnan(v); }

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}
}  // namespace

Period parse_period(const std::string& token) {
    const std::string t = trim(token);
    const std::size_t q = t.find('Q');
    if (q == std::string::npos || q == 0 || q + 2 != t.size())
        throw ParseError("bad period token \"" + t + "\", expected YYYYQn");
    const std::string year_part = t.substr(0, q);
    if (!all_digits(year_part))
        throw ParseError("bad period token \"" + t + "\", expected YYYYQn");
    const char qc = t[q + 1];
    if (qc < '1' || qc > '4')
        throw ParseError("quarter out of range in \"" + t + "\"");
    return Period{std::stoi(year_part), qc - '0'};
}

std::string to_string(const Period& p) {
    return std::to_string(p.year) + "Q" + std::to_string(p.quarter);
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.feature_names = feature_names;
    out.scale = scale;
    out.sector = sector;
    out.observations.reserve(indices.size());
    for (std::size_t i : indices) out.observations.push_back(observations.at(i));
    return out;
}

Dataset load_csv(const std::string& path, const ScalePtr& scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    Dataset d;
    d.scale = scale;
    d.sector = path;

    std::map<std::pair<std::string, Period>, std::size_t> row_of;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    std::size_t n_cols = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split(line, ',');

        if (!header_seen) {
            if (fields.size() < 3 || trim(fields[0]) != "company_id" ||
                trim(fields[1]) != "period" || trim(fields[2]) != "rating")
                throw ParseError("header must start with company_id,period,rating", line_no);
            for (std::size_t j = 3; j < fields.size(); ++j) {
                const std::string name = trim(fields[j]);
                if (name.empty()) throw ParseError("empty feature name in header", line_no);
                d.feature_names.push_back(name);
            }
            n_cols = fields.size();
            header_seen = true;
            continue;
        }

        if (fields.size() != n_cols)
            throw ParseError("expected " + std::to_string(n_cols) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        const std::string company = trim(fields[0]);
        if (company.empty()) throw ParseError("empty company_id", line_no);

        Period period{};
        try {
            period = parse_period(fields[1]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }

        std::optional<Rating> rating;
        try {
            rating = parse_rating(fields[2], scale);
        } catch (const UnknownLabelError& e) {
            throw ParseError(e.what(), line_no);
        }

        std::vector<double> feats;
        feats.reserve(n_cols - 3);
        for (std::size_t j = 3; j < n_cols; ++j) {
            const std::string f = trim(fields[j]);
            if (f.empty()) {
                feats.push_back(kMissing);
                continue;
            }
            try {
                feats.push_back(parse_double(f));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line_no);
            }
        }

        const auto key = std::make_pair(company, period);
        if (row_of.count(key))
            throw DuplicateKeyError("duplicate (company_id, period): " + company + ", " +
                                    to_string(period));
        row_of[key] = d.observations.size();
        d.observations.push_back(Observation{company, period, std::move(feats), *rating, {}});
    }
    if (!header_seen) throw ParseError("file has no header row", line_no == 0 ? 1 : line_no);

    for (auto& obs : d.observations) {
        auto it = row_of.find(std::make_pair(obs.company_id, obs.period.prev()));
        if (it != row_of.end()) obs.prev_rating = d.observations[it->second].rating;
    }
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "company_id,period,rating";
    for (const auto& name : d.feature_names) out << ',' << name;
    out << '\n';
    for (const auto& obs : d.observations) {
        out << obs.company_id << ',' << to_string(obs.period) << ',' << obs.rating.label();
        for (double v : obs.features) {
            out << ',';
            if (!is_missing(v)) out << fmt_double(v);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

Preprocessor fit_preprocessor(const Dataset& train) {
    if (train.observations.empty())
        throw EmptyDatasetError("cannot fit preprocessor on an empty dataset");
    const std::size_t p = train.feature_count();
    const std::size_t n = train.size();
    Preprocessor pre;
    pre.impute.resize(p);
    pre.mean.resize(p);
    pre.sd.resize(p);
    pre.all_missing.assign(p, 0);

    std::vector<double> col;
    col.reserve(n);
    for (std::size_t j = 0; j < p; ++j) {
        col.clear();
        for (const auto& obs : train.observations) {
            double v = obs.features.at(j);
            if (!is_missing(v)) col.push_back(v);
        }
        if (col.empty()) {
            pre.impute[j] = 0.0;
            pre.all_missing[j] = 1;
        } else {
            std::sort(col.begin(), col.end());
            const std::size_t m = col.size();
            pre.impute[j] = (m % 2 == 1) ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
        }

        double sum = 0.0;
        for (const auto& obs : train.observations) {
            double v = obs.features[j];
            sum += is_missing(v) ? pre.impute[j] : v;
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& obs : train.observations) {
            double v = obs.features[j];
            if (is_missing(v)) v = pre.impute[j];
            ss += (v - mean) * (v - mean);
        }
        pre.mean[j] = mean;
        pre.sd[j] = std::max(std::sqrt(ss / static_cast<double>(n)), 1e-12);
    }
    pre.fitted = true;
    return pre;
}

Dataset apply_preprocessor(const Preprocessor& p, const Dataset& d) {
    if (!p.fitted) throw NotFittedError("preprocessor has not been fitted");
    if (d.feature_count() != p.mean.size())
        throw DimensionMismatchError("dataset has " + std::to_string(d.feature_count()) +
                                     " features, preprocessor expects " +
                                     std::to_string(p.mean.size()));
    Dataset out = d;
    for (auto& obs : out.observations) {
        for (std::size_t j = 0; j < obs.features.size(); ++j) {
            double v = obs.features[j];
            if (is_missing(v)) v = p.impute[j];
            obs.features[j] = (v - p.mean[j]) / p.sd[j];
        }
    }
    return out;
}

SplitIndices3 random_split_indices(std::size_t n, double f_train, double f_validation,
                                   double f_test, std::uint64_t seed) {
    if (f_train < 0 || f_validation < 0 || f_test < 0 ||
        std::abs(f_train + f_validation + f_test - 1.0) > 1e-9)
        throw BadFractionsError("split fractions must be non-negative and sum to 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const auto nd = static_cast<double>(n);
    const auto n_val = static_cast<std::size_t>(std::floor(f_validation * nd));
    const auto n_test = static_cast<std::size_t>(std::floor(f_test * nd));
    const std::size_t n_train = n - n_val - n_test;

    SplitIndices3 s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                        order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.validation.begin(), s.validation.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

Split3 random_split(const Dataset& d, double f_train, double f_validation, double f_test,
                    std::uint64_t seed) {
    SplitIndices3 s = random_split_indices(d.size(), f_train, f_validation, f_test, seed);
    return Split3{d.subset(s.train), d.subset(s.validation), d.subset(s.test)};
}

Split2 temporal_split(const Dataset& d, const Period& cutoff) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.observations[i].period <= cutoff)
            train_idx.push_back(i);
        else
            test_idx.push_back(i);
    }
    return Split2{d.subset(train_idx), d.subset(test_idx)};
}

std::vector<FoldIndices> kfold_indices(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2 || static_cast<std::size_t>(k) > n)
        throw BadKError("k must satisfy 2 <= k <= " + std::to_string(n) + ", got " +
                        std::to_string(k));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t rem = n % static_cast<std::size_t>(k);
    std::vector<FoldIndices> folds(static_cast<std::size_t>(k));
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::size_t len = base + (f < rem ? 1 : 0);
        folds[f].test.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                             order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    for (std::size_t f = 0; f < folds.size(); ++f) {
        folds[f].train.reserve(n - folds[f].test.size());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            folds[f].train.insert(folds[f].train.end(), folds[g].test.begin(),
                                  folds[g].test.end());
        }
        std::sort(folds[f].train.begin(), folds[f].train.end());
        std::sort(folds[f].test.begin(), folds[f].test.end());
    }
    return folds;
}

std::vector<Split2> kfold(const Dataset& d, int k, std::uint64_t seed) {
    std::vector<Split2> out;
    for (const auto& f : kfold_indices(d.size(), k, seed))
        out.push_back(Split2{d.subset(f.train), d.subset(f.test)});
    return out;
}

Rating majority_rating(const Dataset& d) {
    if (d.observations.empty())
        throw EmptyDatasetError("majority rating of an empty dataset");
    std::vector<long long> counts(static_cast<std::size_t>(d.scale->size()) + 1, 0);
    for (const auto& obs : d.observations)
        ++counts[static_cast<std::size_t>(obs.rating.index())];
    int best = 1;
    for (int i = 2; i <= d.scale->size(); ++i)
        if (counts[static_cast<std::size_t>(i)] > counts[static_cast<std::size_t>(best)])
            best = i;
    return Rating(best, d.scale);
}

std::vector<Rating> previous_rating_baseline(const Dataset& test, const Rating& fallback) {
    std::vector<Rating> preds;
    preds.reserve(test.size());
    for (const auto& obs : test.observations)
        preds.push_back(obs.prev_rating ? *obs.prev_rating : fallback);
    return preds;
}

namespace {
int draw_categorical(Rng& rng, const std::vector<double>& cumulative) {
    const double u = rng.uniform01();
    for (std::size_t i = 0; i < cumulative.size(); ++i)
        if (u < cumulative[i]) return static_cast<int>(i) + 1;
    return static_cast<int>(cumulative.size());
}

int step_chain(Rng& rng, int state, int m, double persistence) {
    if (rng.uniform01() < persistence) return state;
    const int dir = rng.uniform01() < 0.5 ? -1 : +1;
    return std::clamp(state + dir, 1, m);
}
}  // namespace

Dataset synthesize(const SynthSpec& spec, const ScalePtr& scale, std::uint64_t seed) {
    const int m = scale->size();
    if (spec.companies < 1 || spec.quarters < 1)
        throw BadSpecError("companies and quarters must be positive");
    if (!(spec.persistence >= 0.0 && spec.persistence <= 1.0))
        throw BadSpecError("persistence must lie in [0,1]");
    if (spec.n_features < 0 || spec.informative < 0 || spec.informative > spec.n_features)
        throw BadSpecError("need 0 <= informative <= n_features");
    if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.separation))
        throw BadSpecError("noise_sd must be >= 0 and separation finite");
    if (!spec.marginals.empty()) {
        if (static_cast<int>(spec.marginals.size()) != m)
            throw BadSpecError("marginals must list one weight per scale label");
        for (double w : spec.marginals)
            if (!(w > 0.0)) throw BadSpecError("marginal weights must be positive");
    }

    std::vector<double> cumulative(static_cast<std::size_t>(m));
    {
        double total = 0.0;
        for (int i = 0; i < m; ++i)
            total += spec.marginals.empty() ? 1.0 : spec.marginals[static_cast<std::size_t>(i)];
        double run = 0.0;
        for (int i = 0; i < m; ++i) {
            run += (spec.marginals.empty() ? 1.0 : spec.marginals[static_cast<std::size_t>(i)]) /
                   total;
            cumulative[static_cast<std::size_t>(i)] = run;
        }
    }

    Dataset d;
    d.scale = scale;
    d.sector = spec.sector;
    for (int j = 1; j <= spec.n_features; ++j) d.feature_names.push_back("f" + std::to_string(j));

    for (int c = 0; c < spec.companies; ++c) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(c));
        char cid[16];
        std::snprintf(cid, sizeof(cid), "C%05d", c + 1);

        int state = draw_categorical(rng, cumulative);
        Period period = spec.start;
        for (int q = 0; q < spec.quarters; ++q) {
            const int prev = state;
            state = step_chain(rng, state, m, spec.persistence);
            std::vector<double> feats(static_cast<std::size_t>(spec.n_features));
            for (int j = 0; j < spec.n_features; ++j) {
                const double center = j < spec.informative ? spec.separation * state : 0.0;
                feats[static_cast<std::size_t>(j)] = center + rng.normal() * spec.noise_sd;
            }
            d.observations.push_back(Observation{cid, period, std::move(feats),
                                                 Rating(state, scale), Rating(prev, scale)});
            period = period.next();
        }
    }
    return d;
}

}  // namespace notchbench
