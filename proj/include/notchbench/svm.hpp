#pragma once

#include <cstdint>
#include <vector>

#include "notchbench/cart.hpp"

namespace notchbench {

struct Kernel {
    enum class Type { linear, rbf, polynomial, sigmoid };

    Type type = Type::linear;
    double gamma = 1.0;
    double coef0 = 0.0;  // r
    int degree = 3;      // d

    static Kernel linear() { return Kernel{Type::linear, 0.0, 0.0, 0}; }
    static Kernel rbf(double gamma) { return Kernel{Type::rbf, gamma, 0.0, 0}; }
    static Kernel polynomial(double gamma, double r, int d) {
        return Kernel{Type::polynomial, gamma, r, d};
    }
    static Kernel sigmoid(double gamma, double r) { return Kernel{Type::sigmoid, gamma, r, 0}; }
};

/// linear: x.z; rbf: exp(-gamma ||x-z||^2); polynomial: (gamma x.z + r)^d;
/// sigmoid: tanh(gamma x.z + r).
double kernel_eval(const Kernel& k, const std::vector<double>& x, const std::vector<double>& z);

/// Soft-margin binary classifier in dual form. Only rows with alpha > 1e-12
/// are stored. A degenerate single-label subproblem is represented as a
/// constant classifier (constant flag set, no support vectors).
struct BinarySvmModel {
    FeatureMatrix support_x;
    std::vector<double> alpha;
    std::vector<int> support_y;             // +1 / -1
    std::vector<std::size_t> support_rows;  // row indices in the training input
    double bias = 0.0;
    Kernel kernel;
    double c = 1.0;
    bool converged = true;

    bool constant = false;
    double constant_value = 0.0;  // decision value emitted by a constant model
};

/// Minimizes 1/2 a'Qa - e'a subject to 0 <= a_i <= C and y'a = 0 by pairwise
/// coordinate steps (SMO): repeatedly pick a KKT-violating pair, solve its
/// two-variable subproblem in closed form, clip to the box. Stops when every
/// row satisfies the KKT conditions within tol; if max_passes outer sweeps
/// are exhausted first the model is returned with converged = false. The
/// final bias is recomputed from the free support vectors (averaged), or from
/// the midpoint of the feasible interval when none are free. Labels must be
/// +1/-1 and both present (DegenerateLabels otherwise).
BinarySvmModel fit_binary_svm(const FeatureMatrix& x, const std::vector<int>& y, double c,
                              const Kernel& kernel, double tol = 1e-3, int max_passes = 1000);

/// sum_i alpha_i y_i K(x, sv_i) + bias (the pre-sign value).
double decision_value(const BinarySvmModel& m, const std::vector<double>& x);

/// 1/2 a'Qa - e'a for given multipliers over the full training set.
double dual_objective(const FeatureMatrix& x, const std::vector<int>& y,
                      const std::vector<double>& alpha, const Kernel& kernel);

/// Worst KKT violation of the fitted model over its training set: max over
/// rows of how far y_i * decision_value falls outside the band its alpha
/// demands (>= 1 when alpha = 0, == 1 when free, <= 1 when alpha = C).
double max_kkt_violation(const BinarySvmModel& m, const FeatureMatrix& x,
                         const std::vector<int>& y);

enum class SvmMode { one_vs_one, one_vs_all };

/// One binary subproblem of a multiclass model. For one_vs_one, pos_class and
/// neg_class are the pair (pos_class < neg_class); for one_vs_all, neg_class
/// is 0 and the model separates pos_class from everything else.
struct SvmSubmodel {
    int pos_class = 0;
    int neg_class = 0;
    BinarySvmModel model;
};

struct MulticlassSvm {
    SvmMode mode = SvmMode::one_vs_one;
    std::vector<int> classes;  // distinct training labels, ascending
    std::vector<SvmSubmodel> models;
    Kernel kernel;
    double c = 1.0;
};

/// One binary model per unordered pair of present classes, fit on that pair's
/// rows only; the smaller class takes the +1 side. Pair fits are independent
/// and may run concurrently.
MulticlassSvm fit_ovo(const FeatureMatrix& x, const std::vector<int>& y, double c,
                      const Kernel& kernel, double tol = 1e-3, int max_passes = 1000,
                      bool parallel = true);

/// One binary model per present class: that class +1, all others -1.
MulticlassSvm fit_ova(const FeatureMatrix& x, const std::vector<int>& y, double c,
                      const Kernel& kernel, double tol = 1e-3, int max_passes = 1000,
                      bool parallel = true);

/// Majority vote over pair models; a decision value >= 0 votes the +1 side.
/// Ties break toward the smaller class label.
int predict_ovo(const MulticlassSvm& m, const std::vector<double>& x);

/// argmax of decision values; ties break toward the smaller class label.
int predict_ova(const MulticlassSvm& m, const std::vector<double>& x);

/// Dispatches on m.mode.
int predict_svm(const MulticlassSvm& m, const std::vector<double>& x);

std::vector<int> predict_svm_batch(const MulticlassSvm& m, const FeatureMatrix& x,
                                   bool parallel);

}  // namespace notchbench
