#include "notchbench/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "notchbench/errors.hpp"
#include "notchbench/parallel.hpp"

namespace notchbench {

std::size_t MlpModel::parameter_count() const {
    return (inputs() + 1) * hidden() + (hidden() + 1) * outputs();
}

double logistic(double z) {
    // e^z / (1 + e^z), evaluated on the side that cannot overflow
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

Activations forward(const MlpModel& model, const std::vector<double>& x) {
    if (x.size() != model.inputs())
        throw DimensionMismatchError("input has " + std::to_string(x.size()) +
                                     " features, model expects " +
                                     std::to_string(model.inputs()));
    Activations a;
    a.hidden.resize(model.hidden());
    for (std::size_t j = 0; j < model.hidden(); ++j) {
        double z = model.b1[j];
        const auto& row = model.w1[j];
        for (std::size_t i = 0; i < x.size(); ++i) z += row[i] * x[i];
        a.hidden[j] = logistic(z);
    }
    a.output.resize(model.outputs());
    for (std::size_t k = 0; k < model.outputs(); ++k) {
        double z = model.b2[k];
        const auto& row = model.w2[k];
        for (std::size_t j = 0; j < a.hidden.size(); ++j) z += row[j] * a.hidden[j];
        a.output[k] = logistic(z);
    }
    return a;
}

double loss(const std::vector<double>& y, const std::vector<double>& target) {
    if (y.size() != target.size())
        throw DimensionMismatchError("output and target lengths differ");
    double sum = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double d = target[k] - y[k];
        sum += d * d;
    }
    return 0.5 * sum;
}

std::vector<double> pack_parameters(const MlpModel& model) {
    std::vector<double> flat;
    flat.reserve(model.parameter_count());
    for (const auto& row : model.w1) flat.insert(flat.end(), row.begin(), row.end());
    flat.insert(flat.end(), model.b1.begin(), model.b1.end());
    for (const auto& row : model.w2) flat.insert(flat.end(), row.begin(), row.end());
    flat.insert(flat.end(), model.b2.begin(), model.b2.end());
    return flat;
}

void unpack_parameters(MlpModel& model, const std::vector<double>& flat) {
    if (flat.size() != model.parameter_count())
        throw DimensionMismatchError("flat parameter vector has the wrong length");
    std::size_t pos = 0;
    for (auto& row : model.w1)
        for (auto& w : row) w = flat[pos++];
    for (auto& b : model.b1) b = flat[pos++];
    for (auto& row : model.w2)
        for (auto& w : row) w = flat[pos++];
    for (auto& b : model.b2) b = flat[pos++];
}

namespace {
struct Deltas {
    std::vector<double> out;     // e_k
    std::vector<double> hid;     // e_j
    Activations act;
};

Deltas compute_deltas(const MlpModel& model, const std::vector<double>& x,
                      const std::vector<double>& target) {
    if (target.size() != model.outputs())
        throw DimensionMismatchError("target length does not match output units");
    Deltas d;
    d.act = forward(model, x);
    d.out.resize(model.outputs());
    for (std::size_t k = 0; k < model.outputs(); ++k) {
        const double y = d.act.output[k];
        d.out[k] = (target[k] - y) * y * (1.0 - y);
    }
    d.hid.resize(model.hidden());
    for (std::size_t j = 0; j < model.hidden(); ++j) {
        double back = 0.0;
        for (std::size_t k = 0; k < model.outputs(); ++k) back += model.w2[k][j] * d.out[k];
        const double h = d.act.hidden[j];
        d.hid[j] = back * h * (1.0 - h);
    }
    return d;
}
}  // namespace

std::vector<double> backprop_gradients(const MlpModel& model, const std::vector<double>& x,
                                       const std::vector<double>& target) {
    const Deltas d = compute_deltas(model, x, target);
    std::vector<double> grad;
    grad.reserve(model.parameter_count());
    for (std::size_t j = 0; j < model.hidden(); ++j)
        for (std::size_t i = 0; i < model.inputs(); ++i) grad.push_back(-d.hid[j] * x[i]);
    for (std::size_t j = 0; j < model.hidden(); ++j) grad.push_back(-d.hid[j]);
    for (std::size_t k = 0; k < model.outputs(); ++k)
        for (std::size_t j = 0; j < model.hidden(); ++j)
            grad.push_back(-d.out[k] * d.act.hidden[j]);
    for (std::size_t k = 0; k < model.outputs(); ++k) grad.push_back(-d.out[k]);
    return grad;
}

double gradient_check(const MlpModel& model, const std::vector<double>& x,
                      const std::vector<double>& target, double step) {
    const std::vector<double> analytic = backprop_gradients(model, x, target);
    std::vector<double> flat = pack_parameters(model);
    MlpModel probe = model;

    double worst = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double saved = flat[i];
        flat[i] = saved + step;
        unpack_parameters(probe, flat);
        const double up = loss(forward(probe, x).output, target);
        flat[i] = saved - step;
        unpack_parameters(probe, flat);
        const double down = loss(forward(probe, x).output, target);
        flat[i] = saved;

        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-8);
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

namespace {
std::vector<double> one_hot(int label, std::size_t n_out) {
    std::vector<double> t(n_out, 0.0);
    t[static_cast<std::size_t>(label - 1)] = 1.0;
    return t;
}

void check_labels(const std::vector<int>& y, std::size_t n_out) {
    for (int label : y)
        if (label < 1 || static_cast<std::size_t>(label) > n_out)
            throw BadParamsError("class label " + std::to_string(label) +
                                 " outside 1.." + std::to_string(n_out));
}

double accuracy_on(const MlpModel& model, const FeatureMatrix& x, const std::vector<int>& y) {
    long long hits = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (predict_mlp(model, x[i]) == y[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(x.size());
}
}  // namespace

double train_epoch(MlpModel& model, const FeatureMatrix& x, const std::vector<int>& y,
                   double eta, Rng& rng) {
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    check_labels(y, model.outputs());

    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    double total = 0.0;
    for (std::size_t r : order) {
        const std::vector<double> target = one_hot(y[r], model.outputs());
        const Deltas d = compute_deltas(model, x[r], target);
        total += loss(d.act.output, target);

        for (std::size_t k = 0; k < model.outputs(); ++k) {
            for (std::size_t j = 0; j < model.hidden(); ++j)
                model.w2[k][j] += eta * d.out[k] * d.act.hidden[j];
            model.b2[k] += eta * d.out[k];
        }
        for (std::size_t j = 0; j < model.hidden(); ++j) {
            for (std::size_t i = 0; i < model.inputs(); ++i)
                model.w1[j][i] += eta * d.hid[j] * x[r][i];
            model.b1[j] += eta * d.hid[j];
        }
    }
    return total / static_cast<double>(x.size());
}

MlpModel fit_mlp(const FeatureMatrix& x_train, const std::vector<int>& y_train,
                 const FeatureMatrix& x_val, const std::vector<int>& y_val,
                 const MlpParams& params) {
    if (x_train.empty()) throw EmptyDatasetError("cannot fit an MLP on zero rows");
    if (x_train.size() != y_train.size() || x_val.size() != y_val.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    if (params.inputs < 1 || params.hidden < 1 || params.outputs < 1)
        throw BadParamsError("layer sizes must be >= 1");
    if (!(params.eta > 0.0)) throw BadParamsError("learning rate must be positive");
    if (params.epochs < 1) throw BadParamsError("epochs must be >= 1");
    if (params.patience < 0) throw BadParamsError("patience must be >= 0");
    if (x_train[0].size() != static_cast<std::size_t>(params.inputs))
        throw DimensionMismatchError("training rows do not match params.inputs");
    check_labels(y_train, static_cast<std::size_t>(params.outputs));
    check_labels(y_val, static_cast<std::size_t>(params.outputs));

    const auto l = static_cast<std::size_t>(params.inputs);
    const auto m = static_cast<std::size_t>(params.hidden);
    const auto n = static_cast<std::size_t>(params.outputs);

    Rng rng(params.seed);
    MlpModel model;
    model.w1.assign(m, std::vector<double>(l));
    model.b1.assign(m, 0.0);
    model.w2.assign(n, std::vector<double>(m));
    model.b2.assign(n, 0.0);
    for (auto& row : model.w1)
        for (auto& w : row) w = rng.uniform(-0.5, 0.5);
    for (auto& b : model.b1) b = rng.uniform(-0.5, 0.5);
    for (auto& row : model.w2)
        for (auto& w : row) w = rng.uniform(-0.5, 0.5);
    for (auto& b : model.b2) b = rng.uniform(-0.5, 0.5);

    const bool has_val = !x_val.empty();
    MlpModel best = model;
    double best_score = -1.0;
    int stall = 0;
    const int stop_after = std::max(1, params.patience);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        train_epoch(model, x_train, y_train, params.eta, rng);
        const double score = has_val ? accuracy_on(model, x_val, y_val)
                                     : accuracy_on(model, x_train, y_train);
        if (score > best_score) {
            best_score = score;
            best = model;
            stall = 0;
        } else if (++stall >= stop_after) {
            break;
        }
    }
    return best;
}

int predict_mlp(const MlpModel& model, const std::vector<double>& x) {
    const Activations a = forward(model, x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < a.output.size(); ++k)
        if (a.output[k] > a.output[best]) best = k;
    return static_cast<int>(best) + 1;
}

std::vector<int> predict_mlp_batch(const MlpModel& model, const FeatureMatrix& x, bool parallel) {
    std::vector<int> out(x.size(), 0);
    parallel_for_index(x.size(), parallel, [&](std::size_t i) { out[i] = predict_mlp(model, x[i]); });
    return out;
}

}  // namespace notchbench
