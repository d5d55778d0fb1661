#pragma once

#include <cstdint>
#include <vector>

#include "notchbench/cart.hpp"
#include "notchbench/rng.hpp"

namespace notchbench {

struct MlpParams {
    int inputs = 1;    // l
    int hidden = 32;   // m
    int outputs = 1;   // n; class labels must lie in 1..outputs
    double eta = 0.1;
    int epochs = 500;
    int patience = 25;
    std::uint64_t seed = 0;
};

/// One-hidden-layer perceptron with logistic units on both layers. Output
/// unit k-1 scores class label k.
struct MlpModel {
    std::vector<std::vector<double>> w1;  // hidden x inputs
    std::vector<double> b1;
    std::vector<std::vector<double>> w2;  // outputs x hidden
    std::vector<double> b2;

    std::size_t inputs() const { return w1.empty() ? 0 : w1[0].size(); }
    std::size_t hidden() const { return w1.size(); }
    std::size_t outputs() const { return w2.size(); }
    /// (l+1)m + (m+1)n.
    std::size_t parameter_count() const;
};

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;
};

double logistic(double z);

Activations forward(const MlpModel& model, const std::vector<double>& x);

/// Squared error 0.5 * sum((target_k - y_k)^2).
double loss(const std::vector<double>& y, const std::vector<double>& target);

/// Parameters flattened as w1 row-major, b1, w2 row-major, b2; gradients use
/// the same layout.
std::vector<double> pack_parameters(const MlpModel& model);
void unpack_parameters(MlpModel& model, const std::vector<double>& flat);

/// Analytic d(loss)/d(parameter) for one sample, via the delta rule: output
/// deltas e_k = (t_k - y_k) y_k (1 - y_k), hidden deltas summed over output
/// units, gradient = -delta * upstream activation.
std::vector<double> backprop_gradients(const MlpModel& model, const std::vector<double>& x,
                                       const std::vector<double>& target);

/// Max over parameters of |analytic - numeric| / max(|analytic| + |numeric|,
/// 1e-8), numeric via central differences with the given step.
double gradient_check(const MlpModel& model, const std::vector<double>& x,
                      const std::vector<double>& target, double step = 1e-5);

/// One stochastic pass in rng-shuffled row order; each sample's deltas are
/// computed from the current weights and applied immediately. Returns the
/// mean per-sample loss (measured at the weights each sample was scored
/// with).
double train_epoch(MlpModel& model, const FeatureMatrix& x, const std::vector<int>& y,
                   double eta, Rng& rng);

/// Trains with uniform [-0.5, 0.5] initialization and early stopping: keeps
/// the snapshot with the best validation accuracy and stops after `patience`
/// (at least 1) epochs without improvement. With an empty validation set,
/// training accuracy drives the stopping rule instead.
MlpModel fit_mlp(const FeatureMatrix& x_train, const std::vector<int>& y_train,
                 const FeatureMatrix& x_val, const std::vector<int>& y_val,
                 const MlpParams& params);

/// argmax_k y_k, returned as the 1-based class label; ties break toward the
/// smaller label.
int predict_mlp(const MlpModel& model, const std::vector<double>& x);

std::vector<int> predict_mlp_batch(const MlpModel& model, const FeatureMatrix& x, bool parallel);

}  // namespace notchbench
