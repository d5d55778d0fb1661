// Times each OpenMP-parallel kernel against its serial execution and checks
// that both produce identical results. Exits nonzero on any mismatch.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "notchbench/dataset.hpp"
#include "notchbench/ensemble.hpp"
#include "notchbench/mlp.hpp"
#include "notchbench/parallel.hpp"
#include "notchbench/svm.hpp"

using namespace notchbench;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool report_row(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-18s %9.3fs %9.3fs %7.2fx  %s\n", name, serial_s, parallel_s,
                parallel_s > 0 ? serial_s / parallel_s : 0.0,
                identical ? "identical" : "MISMATCH");
    return identical;
}

}  // namespace

int main(int argc, char** argv) {
    const int scale_factor = argc > 1 ? std::atoi(argv[1]) : 1;

    SynthSpec spec;
    spec.companies = 40 * scale_factor;
    spec.quarters = 30;
    spec.n_features = 12;
    spec.informative = 4;
    spec.separation = 2.0;
    const Dataset data = synthesize(spec, default_sp_scale(), 7);

    FeatureMatrix x;
    std::vector<int> y;
    for (const auto& obs : data.observations) {
        x.push_back(obs.features);
        y.push_back(obs.rating.index());
    }

    std::printf("%zu rows, %zu features, %d threads\n", x.size(), x[0].size(),
                hardware_threads());
    std::printf("%-18s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

    bool ok = true;

    EnsembleParams ep;
    ep.n_trees = 80;
    ep.seed = 11;
    ep.parallel = false;
    auto t0 = Clock::now();
    const Ensemble forest_s = fit_bagged(x, y, ep);
    const double fit_serial = elapsed(t0);
    ep.parallel = true;
    t0 = Clock::now();
    const Ensemble forest_p = fit_bagged(x, y, ep);
    const double fit_parallel = elapsed(t0);

    t0 = Clock::now();
    const auto pred_s = predict_ensemble_batch(forest_s, x, false);
    const double pred_serial = elapsed(t0);
    t0 = Clock::now();
    const auto pred_p = predict_ensemble_batch(forest_p, x, true);
    const double pred_parallel = elapsed(t0);

    const auto imp_s = variable_importance(forest_s, x, y);
    const auto imp_p = variable_importance(forest_p, x, y);
    ok &= report_row("ensemble fit", fit_serial, fit_parallel,
                     pred_s == pred_p && imp_s == imp_p);
    ok &= report_row("ensemble predict", pred_serial, pred_parallel, pred_s == pred_p);

    const std::size_t svm_rows = std::min<std::size_t>(x.size(), 400);
    const FeatureMatrix xs(x.begin(), x.begin() + svm_rows);
    const std::vector<int> ys(y.begin(), y.begin() + svm_rows);
    const Kernel k = Kernel::rbf(1.0 / static_cast<double>(x[0].size()));

    t0 = Clock::now();
    const MulticlassSvm svm_s = fit_ovo(xs, ys, 1.0, k, 1e-3, 200, false);
    const double svm_serial = elapsed(t0);
    t0 = Clock::now();
    const MulticlassSvm svm_p = fit_ovo(xs, ys, 1.0, k, 1e-3, 200, true);
    const double svm_parallel = elapsed(t0);

    bool svm_same = svm_s.models.size() == svm_p.models.size();
    for (std::size_t i = 0; svm_same && i < svm_s.models.size(); ++i) {
        const auto& a = svm_s.models[i].model;
        const auto& b = svm_p.models[i].model;
        svm_same = a.alpha == b.alpha && a.bias == b.bias && a.support_rows == b.support_rows;
    }
    svm_same = svm_same && predict_svm_batch(svm_s, xs, false) == predict_svm_batch(svm_p, xs, true);
    ok &= report_row("svm pair fits", svm_serial, svm_parallel, svm_same);

    MlpParams mp;
    mp.inputs = static_cast<int>(x[0].size());
    mp.hidden = 24;
    mp.outputs = default_sp_scale()->size();
    mp.epochs = 20;
    mp.seed = 5;
    const MlpModel net = fit_mlp(x, y, {}, {}, mp);
    t0 = Clock::now();
    const auto mlp_s = predict_mlp_batch(net, x, false);
    const double mlp_serial = elapsed(t0);
    t0 = Clock::now();
    const auto mlp_p = predict_mlp_batch(net, x, true);
    const double mlp_parallel = elapsed(t0);
    ok &= report_row("mlp predict", mlp_serial, mlp_parallel, mlp_s == mlp_p);

    if (!ok) {
        std::printf("parallel kernels disagree with the serial reference\n");
        return 1;
    }
    return 0;
}
