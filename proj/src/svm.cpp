#include "notchbench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "notchbench/errors.hpp"
#include "notchbench/parallel.hpp"

namespace notchbench {

double kernel_eval(const Kernel& k, const std::vector<double>& x, const std::vector<double>& z) {
    if (x.size() != z.size())
        throw DimensionMismatchError("kernel arguments have different lengths");
    switch (k.type) {
        case Kernel::Type::linear: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
            return dot;
        }
        case Kernel::Type::rbf: {
            if (!(k.gamma > 0.0)) throw BadParamsError("rbf kernel needs gamma > 0");
            double dist = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - z[i];
                dist += d * d;
            }
            return std::exp(-k.gamma * dist);
        }
        case Kernel::Type::polynomial: {
            if (k.degree < 1) throw BadParamsError("polynomial kernel needs degree >= 1");
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
            return std::pow(k.gamma * dot + k.coef0, k.degree);
        }
        case Kernel::Type::sigmoid: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
            return std::tanh(k.gamma * dot + k.coef0);
        }
    }
    throw BadParamsError("unknown kernel type");
}

namespace {

// Pairwise coordinate solver state. The decision function is
// f(x) = sum_j alpha_j y_j K(x_j, x) + b and the cache holds E_i = f(x_i) - y_i.
struct Smo {
    const FeatureMatrix& x;
    const std::vector<int>& y;
    double c;
    const Kernel& kernel;
    double tol;

    std::vector<double> alpha;
    std::vector<double> error;
    double b = 0.0;

    std::vector<double> gram;  // full Gram matrix when small enough
    bool use_gram = false;

    static constexpr double kEps = 1e-12;

    Smo(const FeatureMatrix& x_, const std::vector<int>& y_, double c_, const Kernel& k_,
        double tol_)
        : x(x_), y(y_), c(c_), kernel(k_), tol(tol_) {
        const std::size_t n = x.size();
        alpha.assign(n, 0.0);
        error.resize(n);
        for (std::size_t i = 0; i < n; ++i) error[i] = -y[i];
        if (n <= 2500) {
            use_gram = true;
            gram.resize(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    gram[i * n + j] = gram[j * n + i] = kernel_eval(kernel, x[i], x[j]);
        }
    }

    double k_at(std::size_t i, std::size_t j) const {
        return use_gram ? gram[i * x.size() + j] : kernel_eval(kernel, x[i], x[j]);
    }

    bool non_bound(std::size_t i) const { return alpha[i] > kEps && alpha[i] < c - kEps; }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha[i1], alph2 = alpha[i2];
        const int y1 = y[i1], y2 = y[i2];
        const double e1 = error[i1], e2 = error[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c, c + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph2 + alph1 - c);
            hi = std::min(c, alph2 + alph1);
        }
        if (lo >= hi) return false;

        const double k11 = k_at(i1, i1), k12 = k_at(i1, i2), k22 = k_at(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = alph2 + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // Indefinite or flat direction: compare the two endpoint objectives.
            const double f1 = y1 * (e1 - b) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 - b) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double lo_obj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double hi_obj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (lo_obj < hi_obj - kEps)
                a2 = lo;
            else if (lo_obj > hi_obj + kEps)
                a2 = hi;
            else
                a2 = alph2;
        }
        if (std::abs(a2 - alph2) < kEps * (a2 + alph2 + kEps)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c) {
            a2 += s * (a1 - c);
            a1 = c;
        }

        const double d1 = a1 - alph1, d2 = a2 - alph2;
        const double b1 = b - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        const double b2 = b - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        double b_new;
        if (a1 > kEps && a1 < c - kEps)
            b_new = b1;
        else if (a2 > kEps && a2 < c - kEps)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);

        const double db = b_new - b;
        for (std::size_t i = 0; i < x.size(); ++i)
            error[i] += y1 * d1 * k_at(i1, i) + y2 * d2 * k_at(i2, i) + db;

        alpha[i1] = a1;
        alpha[i2] = a2;
        b = b_new;
        return true;
    }

    int examine(std::size_t i2) {
        const int y2 = y[i2];
        const double alph2 = alpha[i2];
        const double e2 = error[i2];
        const double r2 = e2 * y2;
        const bool violated = (r2 < -tol && alph2 < c - kEps) || (r2 > tol && alph2 > kEps);
        if (!violated) return 0;

        // Second choice: largest |E1 - E2| over non-bound rows, then all
        // non-bound rows, then everything, in fixed index order.
        std::size_t best = i2;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!non_bound(i)) continue;
            const double gap = std::abs(error[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best != i2 && take_step(best, i2)) return 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (non_bound(i) && take_step(i, i2)) return 1;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (take_step(i, i2)) return 1;
        return 0;
    }

    bool solve(int max_passes) {
        int num_changed = 0;
        bool examine_all = true;
        int passes = 0;
        while (num_changed > 0 || examine_all) {
            num_changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < x.size(); ++i) num_changed += examine(i);
            } else {
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (non_bound(i)) num_changed += examine(i);
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
            if (++passes >= max_passes && (num_changed > 0 || examine_all)) return false;
        }
        return true;
    }

    // y_i - sum_j alpha_j y_j K_ij, the bias that makes row i sit on its margin.
    double margin_bias(std::size_t i) const {
        double g = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (alpha[j] <= kEps) continue;
            g += alpha[j] * y[j] * k_at(j, i);
        }
        return y[i] - g;
    }

    void recompute_bias() {
        double sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!non_bound(i)) continue;
            sum += margin_bias(i);
            ++free_count;
        }
        if (free_count > 0) {
            b = sum / static_cast<double>(free_count);
            return;
        }
        // All multipliers at bounds: any b inside the KKT-feasible interval
        // works; take its midpoint.
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double mb = margin_bias(i);
            const bool at_zero = alpha[i] <= kEps;
            if ((at_zero && y[i] == 1) || (!at_zero && y[i] == -1))
                lo = std::max(lo, mb);
            else
                hi = std::min(hi, mb);
        }
        if (std::isfinite(lo) && std::isfinite(hi))
            b = 0.5 * (lo + hi);
        else if (std::isfinite(lo))
            b = lo;
        else if (std::isfinite(hi))
            b = hi;
    }
};

}  // namespace

BinarySvmModel fit_binary_svm(const FeatureMatrix& x, const std::vector<int>& y, double c,
                              const Kernel& kernel, double tol, int max_passes) {
    if (x.empty()) throw EmptyDatasetError("cannot fit an SVM on zero rows");
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    if (!(c > 0.0)) throw BadParamsError("C must be positive");
    if (!(tol > 0.0)) throw BadParamsError("tol must be positive");
    if (max_passes < 1) throw BadParamsError("max_passes must be >= 1");

    bool has_pos = false, has_neg = false;
    for (int label : y) {
        if (label == 1)
            has_pos = true;
        else if (label == -1)
            has_neg = true;
        else
            throw BadParamsError("labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw DegenerateLabelsError(std::string("only the ") + (has_pos ? "+1" : "-1") +
                                    " label is present");

    Smo smo(x, y, c, kernel, tol);
    const bool converged = smo.solve(max_passes);
    smo.recompute_bias();

    BinarySvmModel m;
    m.kernel = kernel;
    m.c = c;
    m.bias = smo.b;
    m.converged = converged;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (smo.alpha[i] <= Smo::kEps) continue;
        m.support_x.push_back(x[i]);
        m.alpha.push_back(smo.alpha[i]);
        m.support_y.push_back(y[i]);
        m.support_rows.push_back(i);
    }
    return m;
}

double decision_value(const BinarySvmModel& m, const std::vector<double>& x) {
    if (m.constant) return m.constant_value;
    double sum = m.bias;
    for (std::size_t i = 0; i < m.support_x.size(); ++i)
        sum += m.alpha[i] * m.support_y[i] * kernel_eval(m.kernel, m.support_x[i], x);
    return sum;
}

double dual_objective(const FeatureMatrix& x, const std::vector<int>& y,
                      const std::vector<double>& alpha, const Kernel& kernel) {
    if (x.size() != y.size() || x.size() != alpha.size())
        throw DimensionMismatchError("dual objective needs equal-length inputs");
    double quad = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (alpha[i] == 0.0) {
            continue;
        }
        lin += alpha[i];
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (alpha[j] == 0.0) continue;
            quad += alpha[i] * alpha[j] * y[i] * y[j] * kernel_eval(kernel, x[i], x[j]);
        }
    }
    return 0.5 * quad - lin;
}

double max_kkt_violation(const BinarySvmModel& m, const FeatureMatrix& x,
                         const std::vector<int>& y) {
    if (x.size() != y.size())
        throw DimensionMismatchError("feature matrix and labels disagree on row count");
    std::vector<double> alpha(x.size(), 0.0);
    for (std::size_t s = 0; s < m.support_rows.size(); ++s)
        alpha[m.support_rows[s]] = m.alpha[s];

    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = y[i] * decision_value(m, x[i]);
        double v = 0.0;
        if (alpha[i] <= Smo::kEps)
            v = std::max(0.0, 1.0 - u);
        else if (alpha[i] >= m.c - Smo::kEps)
            v = std::max(0.0, u - 1.0);
        else
            v = std::abs(u - 1.0);
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {
std::vector<int> distinct_classes(const std::vector<int>& y) {
    std::vector<int> classes = y;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    return classes;
}

BinarySvmModel constant_model(double value, const Kernel& kernel, double c) {
    BinarySvmModel m;
    m.kernel = kernel;
    m.c = c;
    m.constant = true;
    m.constant_value = value;
    return m;
}
}  // namespace

MulticlassSvm fit_ovo(const FeatureMatrix& x, const std::vector<int>& y, double c,
                      const Kernel& kernel, double tol, int max_passes, bool parallel) {
    if (x.empty()) throw EmptyDatasetError("cannot fit an SVM on zero rows");
    MulticlassSvm m;
    m.mode = SvmMode::one_vs_one;
    m.classes = distinct_classes(y);
    m.kernel = kernel;
    m.c = c;
    if (m.classes.size() < 2)
        throw SingleClassError("one-vs-one needs at least two classes");

    for (std::size_t a = 0; a < m.classes.size(); ++a)
        for (std::size_t b = a + 1; b < m.classes.size(); ++b)
            m.models.push_back(SvmSubmodel{m.classes[a], m.classes[b], {}});

    parallel_for_index(m.models.size(), parallel, [&](std::size_t idx) {
        SvmSubmodel& sub = m.models[idx];
        FeatureMatrix px;
        std::vector<int> py;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (y[i] == sub.pos_class) {
                px.push_back(x[i]);
                py.push_back(1);
            } else if (y[i] == sub.neg_class) {
                px.push_back(x[i]);
                py.push_back(-1);
            }
        }
        try {
            sub.model = fit_binary_svm(px, py, c, kernel, tol, max_passes);
        } catch (const DegenerateLabelsError&) {
            sub.model = constant_model(py.empty() || py[0] == 1 ? 1.0 : -1.0, kernel, c);
        }
    });
    return m;
}

MulticlassSvm fit_ova(const FeatureMatrix& x, const std::vector<int>& y, double c,
                      const Kernel& kernel, double tol, int max_passes, bool parallel) {
    if (x.empty()) throw EmptyDatasetError("cannot fit an SVM on zero rows");
    MulticlassSvm m;
    m.mode = SvmMode::one_vs_all;
    m.classes = distinct_classes(y);
    m.kernel = kernel;
    m.c = c;
    if (m.classes.size() < 2)
        throw SingleClassError("one-vs-all needs at least two classes");

    for (int cls : m.classes) m.models.push_back(SvmSubmodel{cls, 0, {}});

    parallel_for_index(m.models.size(), parallel, [&](std::size_t idx) {
        SvmSubmodel& sub = m.models[idx];
        std::vector<int> py(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) py[i] = y[i] == sub.pos_class ? 1 : -1;
        try {
            sub.model = fit_binary_svm(x, py, c, kernel, tol, max_passes);
        } catch (const DegenerateLabelsError&) {
            sub.model = constant_model(py[0] == 1 ? 1.0 : -1.0, kernel, c);
        }
    });
    return m;
}

int predict_ovo(const MulticlassSvm& m, const std::vector<double>& x) {
    if (m.mode != SvmMode::one_vs_one)
        throw ModeMismatchError("predict_ovo on a model that is not one-vs-one");
    std::map<int, long long> votes;
    for (int cls : m.classes) votes[cls] = 0;
    for (const auto& sub : m.models)
        ++votes[decision_value(sub.model, x) >= 0.0 ? sub.pos_class : sub.neg_class];
    int best = m.classes.front();
    for (int cls : m.classes)
        if (votes[cls] > votes[best]) best = cls;
    return best;
}

int predict_ova(const MulticlassSvm& m, const std::vector<double>& x) {
    if (m.mode != SvmMode::one_vs_all)
        throw ModeMismatchError("predict_ova on a model that is not one-vs-all");
    int best = m.models.front().pos_class;
    double best_value = decision_value(m.models.front().model, x);
    for (std::size_t i = 1; i < m.models.size(); ++i) {
        const double v = decision_value(m.models[i].model, x);
        if (v > best_value) {
            best_value = v;
            best = m.models[i].pos_class;
        }
    }
    return best;
}

int predict_svm(const MulticlassSvm& m, const std::vector<double>& x) {
    return m.mode == SvmMode::one_vs_one ? predict_ovo(m, x) : predict_ova(m, x);
}

std::vector<int> predict_svm_batch(const MulticlassSvm& m, const FeatureMatrix& x,
                                   bool parallel) {
    std::vector<int> out(x.size(), 0);
    parallel_for_index(x.size(), parallel, [&](std::size_t i) { out[i] = predict_svm(m, x[i]); });
    return out;
}

}  // namespace notchbench
