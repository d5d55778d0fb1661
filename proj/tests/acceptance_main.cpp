// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned in the
// checks themselves. Exits nonzero when any enforced criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "notchbench/cart.hpp"
#include "notchbench/config.hpp"
#include "notchbench/ensemble.hpp"
#include "notchbench/errors.hpp"
#include "notchbench/evaluation.hpp"
#include "notchbench/mlp.hpp"
#include "notchbench/report.hpp"
#include "notchbench/rng.hpp"
#include "notchbench/runner.hpp"
#include "notchbench/svm.hpp"
#include "qp_oracle.hpp"

using namespace notchbench;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_secs(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3fs", s);
    return buf;
}

struct Gate {
    int failures = 0;

    void report(int num, const std::string& name, bool pass, const std::string& detail) {
        if (!pass) ++failures;
        std::printf("criterion %02d: %s  %s%s%s\n", num, pass ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : "  -- ", detail.c_str());
        std::fflush(stdout);
    }

    template <typename Fn>
    void run(int num, const std::string& name, Fn&& fn) {
        std::string detail;
        bool pass = false;
        try {
            pass = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        report(num, name, pass, detail);
    }
};

// ---------------------------------------------------------------- criterion 1

struct RawPairs {
    std::vector<Rating> preds;
    std::vector<Rating> truths;
};

RawPairs random_pairs(Rng& rng, const ScalePtr& scale, std::size_t n) {
    RawPairs rp;
    for (std::size_t i = 0; i < n; ++i) {
        rp.preds.emplace_back(rng.uniform_int(1, scale->size()), scale);
        rp.truths.emplace_back(rng.uniform_int(1, scale->size()), scale);
    }
    return rp;
}

// Everything below recomputes the statistics directly from the raw pairs,
// sharing no code with the library implementation.
bool brute_matches(const RawPairs& rp, std::string& why) {
    const std::size_t n = rp.preds.size();
    std::vector<int> diffs(n);
    for (std::size_t i = 0; i < n; ++i)
        diffs[i] = rp.preds[i].index() - rp.truths[i].index();

    const NotchDistribution d = notch_distribution(rp.preds, rp.truths);
    const NotchStats st = stats(d);
    const BucketSummary bk = bucket_summary(d);
    const double tol = 1e-12;

    for (int i = -25; i <= 25; ++i) {
        std::size_t c = 0;
        for (int y : diffs)
            if (y == i) ++c;
        const double f = static_cast<double>(c) / static_cast<double>(n);
        if (std::fabs(d.frequency(i) - f) > tol) {
            why = "F(" + std::to_string(i) + ") off";
            return false;
        }
    }

    long double s1 = 0, s2 = 0, sabs = 0;
    std::size_t zeros = 0, ones = 0, big = 0;
    for (int y : diffs) {
        s1 += y;
        s2 += static_cast<long double>(y) * y;
        sabs += std::abs(y);
        if (y == 0) ++zeros;
        else if (std::abs(y) == 1) ++ones;
        else ++big;
    }
    const double mean = static_cast<double>(s1 / n);
    const double mom2 = static_cast<double>(s2 / n);
    const double adc = static_cast<double>(sabs / n);
    const double sd = std::sqrt(std::max(0.0, mom2 - mean * mean));
    const double acc = static_cast<double>(zeros) / static_cast<double>(n);

    auto close = [&](double a, double b) { return std::fabs(a - b) <= tol; };
    if (!close(st.accuracy, acc)) { why = "accuracy off"; return false; }
    if (!close(st.dc, mean)) { why = "dc off"; return false; }
    if (!close(st.adc, adc)) { why = "adc off"; return false; }
    if (!close(st.sd, sd)) { why = "sd off"; return false; }
    if (!close(bk.zero, acc)) { why = "bucket zero off"; return false; }
    if (!close(bk.one_abs, static_cast<double>(ones) / n)) { why = "bucket one off"; return false; }
    if (!close(bk.gt_one_abs, static_cast<double>(big) / n)) { why = "bucket >1 off"; return false; }

    std::vector<int> nz;
    for (int y : diffs)
        if (y != 0) nz.push_back(y);
    if (nz.empty()) {
        if (st.cond_dc || st.cond_sd || st.cond_adc) { why = "conditional should be absent"; return false; }
    } else {
        long double c1 = 0, c2 = 0, cabs = 0;
        for (int y : nz) {
            c1 += y;
            c2 += static_cast<long double>(y) * y;
            cabs += std::abs(y);
        }
        const double cmean = static_cast<double>(c1 / nz.size());
        const double cmom2 = static_cast<double>(c2 / nz.size());
        const double csd = std::sqrt(std::max(0.0, cmom2 - cmean * cmean));
        const double cadc = static_cast<double>(cabs / nz.size());
        if (!st.cond_dc || !st.cond_sd || !st.cond_adc) { why = "conditional missing"; return false; }
        if (!close(*st.cond_dc, cmean)) { why = "cond_dc off"; return false; }
        if (!close(*st.cond_sd, csd)) { why = "cond_sd off"; return false; }
        if (!close(*st.cond_adc, cadc)) { why = "cond_adc off"; return false; }
    }
    return true;
}

bool criterion1(std::string& detail) {
    const auto t0 = Clock::now();
    const ScalePtr scale = default_sp_scale();
    Rng rng(20260822);
    const RawPairs rp = random_pairs(rng, scale, 1000);
    std::string why;
    if (!brute_matches(rp, why)) {
        detail = why;
        return false;
    }
    const double secs = seconds_since(t0);
    detail = "1000 pairs vs direct recount, all stats within 1e-12, " + fmt_secs(secs);
    return secs < 1.0;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& detail) {
    const ScalePtr scale = default_sp_scale();
    Rng rng(515151);
    std::size_t tested = 0;
    auto check = [&](const NotchDistribution& d) -> bool {
        const NotchStats st = stats(d);
        const double second_moment = st.sd * st.sd + st.dc * st.dc;
        if (st.adc * st.adc > second_moment + 1e-12) return false;
        if (std::fabs(st.accuracy - d.frequency(0)) > 1e-12) return false;
        ++tested;
        return true;
    };

    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.uniform_int(0, 120);
        const RawPairs rp = random_pairs(rng, scale, n);
        if (!check(notch_distribution(rp.preds, rp.truths))) {
            detail = "random distribution violated the bound";
            return false;
        }
    }
    // degenerate shapes: exact agreement, a single pair, maximal spread
    std::vector<Rating> same;
    for (int i = 1; i <= 20; ++i) same.emplace_back(i, scale);
    if (!check(notch_distribution(same, same))) { detail = "exact-agreement case"; return false; }
    const std::vector<Rating> lo = {Rating(1, scale)}, hi = {Rating(20, scale)};
    if (!check(notch_distribution(lo, hi)) || !check(notch_distribution(hi, lo))) {
        detail = "single extreme pair";
        return false;
    }
    detail = std::to_string(tested) + " distributions: adc^2 <= E[Y^2] and F(0) == accuracy";
    return true;
}

// ---------------------------------------------------------------- criterion 3

bool criterion3(std::string& detail) {
    const auto t0 = Clock::now();
    Rng rng(930);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int l = 1 + rng.uniform_int(0, 4);
        const int m = 1 + rng.uniform_int(0, 4);
        const int n = 1 + rng.uniform_int(0, 4);
        MlpModel model;
        model.w1.assign(m, std::vector<double>(l));
        model.b1.assign(m, 0.0);
        model.w2.assign(n, std::vector<double>(m));
        model.b2.assign(n, 0.0);
        std::vector<double> flat(model.parameter_count());
        for (double& v : flat) v = rng.uniform(-1.5, 1.5);
        unpack_parameters(model, flat);

        if (model.parameter_count() !=
            static_cast<std::size_t>((l + 1) * m + (m + 1) * n)) {
            detail = "parameter count formula broken";
            return false;
        }

        std::vector<double> x(l), target(n);
        for (double& v : x) v = rng.uniform(-2, 2);
        for (double& v : target) v = rng.uniform(0, 1);
        worst = std::max(worst, gradient_check(model, x, target, 1e-5));
    }
    const double secs = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "20 networks, max rel err %.2e (< 1e-4), %s", worst,
                  fmt_secs(secs).c_str());
    detail = buf;
    return worst < 1e-4 && secs < 5.0;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4(std::string& detail) {
    const auto t0 = Clock::now();

    const FeatureMatrix toy_x = {{0.0, 0.0}, {2.0, 2.0}};
    const std::vector<int> toy_y = {-1, 1};
    const BinarySvmModel toy = fit_binary_svm(toy_x, toy_y, 100.0, Kernel::linear(), 1e-4);
    if (toy.alpha.size() != 2 || std::fabs(toy.alpha[0] - 0.25) > 1e-4 ||
        std::fabs(toy.alpha[1] - 0.25) > 1e-4 || std::fabs(toy.bias + 1.0) > 1e-4) {
        detail = "two-point hard-margin solution off";
        return false;
    }

    const std::vector<Kernel> kernels = {Kernel::linear(), Kernel::rbf(0.6),
                                         Kernel::polynomial(0.5, 1.0, 2),
                                         Kernel::sigmoid(0.25, 0.1)};
    const char* names[] = {"linear", "rbf", "polynomial", "sigmoid"};
    Rng rng(606060);
    double worst_gap = 0.0, worst_kkt = 0.0;
    for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
        for (int rep = 0; rep < 5; ++rep) {
            const int n = 4 + rng.uniform_int(0, 4);  // up to 8 points
            FeatureMatrix x;
            std::vector<int> y;
            for (int i = 0; i < n; ++i) {
                const int label = i % 2 == 0 ? 1 : -1;
                x.push_back({label * 1.1 + rng.normal() * 0.9, rng.normal()});
                y.push_back(label);
            }
            const double c = rep % 2 == 0 ? 1.0 : 2.5;
            const double tol = 1e-4;
            const BinarySvmModel m = fit_binary_svm(x, y, c, kernels[ki], tol, 20000);
            if (!m.converged) {
                detail = std::string(names[ki]) + ": solver did not converge";
                return false;
            }
            std::vector<double> alpha(x.size(), 0.0);
            for (std::size_t k = 0; k < m.alpha.size(); ++k)
                alpha[m.support_rows[k]] = m.alpha[k];

            double balance = 0.0;
            for (std::size_t i = 0; i < alpha.size(); ++i) balance += alpha[i] * y[i];
            if (std::fabs(balance) > 1e-8) {
                detail = std::string(names[ki]) + ": equality constraint violated";
                return false;
            }

            const nbtest::QpSolution ref = nbtest::solve_svm_dual(x, y, c, kernels[ki]);
            if (!ref.found) {
                detail = std::string(names[ki]) + ": oracle found no solution";
                return false;
            }
            const double gap =
                std::fabs(dual_objective(x, y, alpha, kernels[ki]) - (-ref.objective));
            const double kkt = max_kkt_violation(m, x, y);
            worst_gap = std::max(worst_gap, gap);
            worst_kkt = std::max(worst_kkt, kkt);
            if (gap > 1e-4) {
                detail = std::string(names[ki]) + ": dual objective gap " + std::to_string(gap);
                return false;
            }
            if (kkt > tol + 1e-9) {
                detail = std::string(names[ki]) + ": kkt violation " + std::to_string(kkt);
                return false;
            }
        }
    }
    const double secs = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "toy exact; 20 problems vs dense QP, worst gap %.2e, worst kkt %.2e, %s",
                  worst_gap, worst_kkt, fmt_secs(secs).c_str());
    detail = buf;
    return secs < 10.0;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5(std::string& detail) {
    Rng data_rng(2525);
    FeatureMatrix x;
    std::vector<int> y;
    for (int i = 0; i < 150; ++i) {
        const int cls = 1 + i % 3;
        std::vector<double> row;
        for (int j = 0; j < 4; ++j) row.push_back(cls * 3.0 + data_rng.normal());
        x.push_back(row);
        y.push_back(cls);
    }

    EnsembleParams p;
    p.n_trees = 30;
    p.sample_size = x.size();
    p.seed = 99;
    p.parallel = false;
    const Ensemble bdt = fit_bagged(x, y, p);
    p.mtry = 4;  // the full feature set
    const Ensemble rf = fit_random_forest(x, y, p);

    Rng probe_rng(2526);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> pt;
        for (int j = 0; j < 4; ++j) pt.push_back(probe_rng.uniform(0, 12));
        if (predict_ensemble(bdt, pt) != predict_ensemble(rf, pt)) {
            detail = "mtry=p forest diverged from bagging";
            return false;
        }
    }

    Rng boot_rng(777);
    double total = 0.0;
    for (int t = 0; t < 1000; ++t)
        total += static_cast<double>(bootstrap_sample(100, 100, boot_rng).oob.size()) / 100.0;
    const double mean_oob = total / 1000.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "200 probes identical; mean OOB fraction %.4f in 0.366+-0.02",
                  mean_oob);
    detail = buf;
    return std::fabs(mean_oob - 0.366) <= 0.02;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6(std::string& detail) {
    Rng rng(3600);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 10 + rng.uniform_int(0, 40);  // <= 50 rows
        const int p = 1 + rng.uniform_int(0, 3);
        FeatureMatrix x;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row;
            for (int j = 0; j < p; ++j) row.push_back(rng.uniform(-2, 2));
            x.push_back(row);
            y.push_back(1 + rng.uniform_int(0, 3));
        }

        TreeParams tp;  // unpruned defaults
        Rng tree_rng(1);
        const DecisionTree tree = fit_tree(x, y, tp, tree_rng);
        for (std::size_t i = 0; i < n; ++i) {
            if (predict_tree(tree, x[i]) != y[i]) {
                detail = "training row misclassified by the unpruned tree";
                return false;
            }
        }

        // strictly increasing per-feature maps must not change any prediction
        FeatureMatrix tx = x;
        for (auto& row : tx)
            for (int j = 0; j < p; ++j) {
                const double v = row[j];
                row[j] = j % 3 == 0 ? v * v * v : j % 3 == 1 ? std::exp(v) : 7.0 * v + 2.0;
            }
        Rng tree_rng2(1);
        const DecisionTree warped = fit_tree(tx, y, tp, tree_rng2);
        for (std::size_t i = 0; i < n; ++i) {
            if (predict_tree(tree, x[i]) != predict_tree(warped, tx[i])) {
                detail = "monotone transform changed a training prediction";
                return false;
            }
        }
    }
    detail = "10 datasets memorized exactly; predictions invariant under monotone maps";
    return true;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7(std::string& detail) {
    const ScalePtr scale = default_sp_scale();
    SynthSpec spec;  // 50 companies x 40 quarters, persistence 0.9
    double acc_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Dataset d = synthesize(spec, scale, seed);
        const std::vector<Rating> preds = previous_rating_baseline(d, majority_rating(d));
        std::vector<Rating> truths;
        std::vector<std::optional<Rating>> prevs;
        for (const Observation& o : d.observations) {
            truths.push_back(o.rating);
            prevs.push_back(o.prev_rating);
        }
        const NotchStats st = stats(notch_distribution(preds, truths));
        acc_total += st.accuracy;

        const CapturedChanges cc = captured_changes(preds, truths, prevs);
        if (cc.exact != 0.0) {
            detail = "carry-forward baseline captured a change exactly";
            return false;
        }
        if (cc.direction != 0.0) {
            detail = "carry-forward baseline moved off the previous rating";
            return false;
        }
    }
    const double mean_acc = acc_total / 5.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean baseline accuracy %.4f in 0.90+-0.02, captured = 0",
                  mean_acc);
    detail = buf;
    return std::fabs(mean_acc - 0.90) <= 0.02;
}

// ---------------------------------------------------------------- criterion 8

std::map<std::string, std::string> snapshot_dir(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), root).generic_string();
        if (rel == "run_meta.txt") continue;  // carries wall-clock timings
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        files[rel] = buf.str();
    }
    return files;
}

bool criterion8(std::string& detail) {
    const ExperimentConfig cfg = parse_config_text(
        "synth.companies = 15\n"
        "synth.quarters = 8\n"
        "synth.features = 5\n"
        "synth.informative = 3\n"
        "synth.separation = 1.5\n"
        "bdt.n_trees = 20\n"
        "rf.n_trees = 20\n"
        "mlp.epochs = 30\n"
        "svm.max_passes = 200\n"
        "seed = 31\n");

    const fs::path dir_a = "acceptance_run_a", dir_b = "acceptance_run_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const EvalReport rep_a = run_experiment(cfg);
    write_report(rep_a, dir_a.string());
    const EvalReport rep_b = run_experiment(cfg);
    write_report(rep_b, dir_b.string());

    const auto snap_a = snapshot_dir(dir_a), snap_b = snapshot_dir(dir_b);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    if (snap_a.empty()) {
        detail = "no report files written";
        return false;
    }
    if (snap_a.size() != snap_b.size()) {
        detail = "report file sets differ";
        return false;
    }
    for (const auto& [rel, content] : snap_a) {
        const auto it = snap_b.find(rel);
        if (it == snap_b.end() || it->second != content) {
            detail = rel + " differs between identical runs";
            return false;
        }
    }

    // fold preprocessors must be reproducible from the stored train rows alone
    for (const FoldResult& fr : rep_a.folds) {
        const Preprocessor refit = fit_preprocessor(rep_a.data.subset(fr.train_rows));
        if (refit.impute != fr.pre.impute || refit.mean != fr.pre.mean ||
            refit.sd != fr.pre.sd || refit.all_missing != fr.pre.all_missing) {
            detail = "stored preprocessor differs from a train-only refit";
            return false;
        }
    }
    detail = std::to_string(snap_a.size()) + " files byte-identical; preprocessor train-only";
    return true;
}

// ---------------------------------------------------------------- criterion 9

bool criterion9(std::string& detail) {
    Rng rng(4242);
    FeatureMatrix x;
    std::vector<int> y;
    for (int cls = 1; cls <= 10; ++cls) {
        for (int i = 0; i < 200; ++i) {
            // 6 noise-sd gaps between adjacent class centers, two informative axes
            x.push_back({cls * 6.0 + rng.normal(), cls * 6.0 + rng.normal()});
            y.push_back(cls);
        }
    }
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    FeatureMatrix xtr, xte;
    std::vector<int> ytr, yte;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i < 1500) {
            xtr.push_back(x[order[i]]);
            ytr.push_back(y[order[i]]);
        } else {
            xte.push_back(x[order[i]]);
            yte.push_back(y[order[i]]);
        }
    }

    auto accuracy = [&](const std::vector<int>& pred) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == yte[i]) ++hits;
        return static_cast<double>(hits) / static_cast<double>(pred.size());
    };

    EnsembleParams p;
    p.n_trees = 50;
    p.sample_size = xtr.size();
    p.seed = 51;
    p.parallel = false;
    const Ensemble bdt = fit_bagged(xtr, ytr, p);
    p.mtry = 1;
    const Ensemble rf = fit_random_forest(xtr, ytr, p);
    const double acc_bdt = accuracy(predict_ensemble_batch(bdt, xte, false));
    const double acc_rf = accuracy(predict_ensemble_batch(rf, xte, false));

    const MulticlassSvm ova = fit_ova(xtr, ytr, 1.0, Kernel::rbf(0.5), 1e-3, 2000, false);
    const double acc_svm = accuracy(predict_svm_batch(ova, xte, false));

    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "bdt %.4f, rf %.4f (both >= 0.95 enforced); ova svm %.4f (%s, logged only)",
                  acc_bdt, acc_rf, acc_svm,
                  acc_svm + 1e-12 < std::min(acc_bdt, acc_rf) ? "trails" : "matches");
    detail = buf;
    return acc_bdt >= 0.95 && acc_rf >= 0.95;
}

// --------------------------------------------------------------- criterion 10

bool criterion10(std::string& detail) {
    const ScalePtr scale = default_sp_scale();
    Rng rng(17);
    Dataset truth, shifted;
    truth.scale = shifted.scale = scale;
    for (int cpy = 0; cpy < 8; ++cpy) {
        for (int q = 1; q <= 4; ++q) {
            const int idx = rng.uniform_int(5, 10);
            const std::string company = "C" + std::to_string(cpy);
            truth.observations.push_back(
                {company, Period{2019, q}, {}, Rating(idx, scale), std::nullopt});
            // always one notch above the other stream
            shifted.observations.push_back(
                {company, Period{2019, q}, {}, Rating(idx + 1, scale), std::nullopt});
        }
    }
    const AgencyComparison cmp = agency_comparison(shifted, truth);
    if (cmp.n_joined != 32) {
        detail = "join lost rows";
        return false;
    }
    if (std::fabs(cmp.stats.dc - 1.0) > 1e-12 || std::fabs(cmp.stats.sd) > 1e-12) {
        detail = "offset stream statistics off";
        return false;
    }

    const std::string csv = agency_comparison_csv("shifted_vs_truth", cmp);
    const std::string header = csv.substr(0, csv.find('\n'));
    if (header != "pair,E,sd,E_abs,cond_E,cond_sd,cond_E_abs,n_joined") {
        detail = "comparison table header changed: " + header;
        return false;
    }
    detail = "dc = +1, sd = 0; table carries the six statistic columns";
    return true;
}

}  // namespace

int main() {
    Gate gate;
    gate.run(1, "notch statistics match a brute-force recount", criterion1);
    gate.run(2, "adc^2 <= E[Y^2] and F(0) = accuracy on every distribution", criterion2);
    gate.run(3, "backprop gradients match central differences", criterion3);
    gate.run(4, "smo agrees with a dense dual enumeration", criterion4);
    gate.run(5, "mtry = p forest equals bagging; oob fraction near 1/e", criterion5);
    gate.run(6, "unpruned trees memorize and ignore monotone rescaling", criterion6);
    gate.run(7, "persistence 0.9 carry-forward baseline scores 0.90 +- 0.02", criterion7);
    gate.run(8, "identical runs write byte-identical tables; no fold leakage", criterion8);
    gate.run(9, "well-separated ten-class data pushes past 0.95 accuracy", criterion9);
    gate.run(10, "offset rating streams read as dc = +1, sd = 0", criterion10);

    if (gate.failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", gate.failures);
    return 1;
}
