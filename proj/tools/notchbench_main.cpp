#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "notchbench/config.hpp"
#include "notchbench/dataset.hpp"
#include "notchbench/errors.hpp"
#include "notchbench/model_io.hpp"
#include "notchbench/report.hpp"
#include "notchbench/runner.hpp"

namespace fs = std::filesystem;
using namespace notchbench;

namespace {

// 0 = success, 1 = configuration problem, 2 = data problem, 3 = anything else.
template <typename Body>
int guarded(Body&& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const BadFractionsError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const BadKError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const UnknownLabelError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const ScaleMismatchError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const DuplicateKeyError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const EmptyDatasetError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const BadSpecError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const VersionMismatchError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const CorruptModelError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const EmptyJoinError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rating classifiers evaluated on the notch-distance scale"};
    app.require_subcommand(1);

    std::string config_path, out_arg, model_path, data_path;
    std::string path_a, path_b, name_a, name_b;
    std::uint64_t seed_arg = 0;
    bool quiet = false, svg = true;

    auto* run = app.add_subcommand("run", "train and evaluate every configured method");
    run->add_option("--config", config_path, "experiment config file");
    auto* run_seed = run->add_option("--seed", seed_arg, "override the master seed");
    auto* run_out = run->add_option("--out", out_arg, "override the output directory");
    run->add_flag("--svg,!--no-svg", svg, "render figures as SVG (default on)");
    run->add_flag("--quiet", quiet, "suppress the summary table");

    auto* cmp = app.add_subcommand("compare-agencies",
                                   "notch statistics of one rating stream against another");
    cmp->add_option("stream_a", path_a, "CSV treated as the prediction stream")->required();
    cmp->add_option("stream_b", path_b, "CSV treated as the truth stream")->required();
    cmp->add_option("--config", config_path, "config supplying the rating scale");
    cmp->add_option("--name-a", name_a, "display name of stream A");
    cmp->add_option("--name-b", name_b, "display name of stream B");
    cmp->add_option("--out", out_arg, "write the CSV here instead of stdout");

    auto* synth = app.add_subcommand("synth", "write a synthetic dataset as CSV");
    synth->add_option("--config", config_path, "config with the synth.* settings");
    auto* synth_seed = synth->add_option("--seed", seed_arg, "override the master seed");
    synth->add_option("--out", out_arg, "output CSV path")->required();

    auto* predict = app.add_subcommand("predict", "score a CSV with a saved model");
    predict->add_option("--model", model_path, "saved .nbm model")->required();
    predict->add_option("--data", data_path, "CSV of rows to score")->required();
    predict->add_option("--out", out_arg, "write predictions here instead of stdout");

    auto* report = app.add_subcommand("report", "re-render figures and summary of a saved run");
    report->add_option("--out", out_arg, "run directory to re-render")->required();
    report->add_flag("--quiet", quiet, "suppress the summary table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    auto load_config = [&]() {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = parse_config_file(config_path);
        return cfg;
    };

    if (app.got_subcommand(run)) {
        return guarded([&] {
            ExperimentConfig cfg = load_config();
            if (run_seed->count()) cfg.seed = seed_arg;
            if (run_out->count()) cfg.out_dir = out_arg;
            cfg.svg = svg;

            const EvalReport rep = run_experiment(cfg);
            write_report(rep, cfg.out_dir);
            for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
            if (!quiet) {
                std::cout << "config " << rep.config_digest << ", " << rep.data.size()
                          << " rows, " << rep.folds.size() << " fold"
                          << (rep.folds.size() == 1 ? "" : "s") << " -> " << cfg.out_dir << '\n'
                          << summarize_report_dir(cfg.out_dir);
            }
        });
    }

    if (app.got_subcommand(cmp)) {
        return guarded([&] {
            const ScalePtr scale = scale_from_config(load_config());
            const Dataset a = load_csv(path_a, scale);
            const Dataset b = load_csv(path_b, scale);
            if (name_a.empty()) name_a = fs::path(path_a).stem().string();
            if (name_b.empty()) name_b = fs::path(path_b).stem().string();
            emit(out_arg, agency_comparison_csv(name_a + "/" + name_b, agency_comparison(a, b)));
        });
    }

    if (app.got_subcommand(synth)) {
        return guarded([&] {
            ExperimentConfig cfg = load_config();
            if (synth_seed->count()) cfg.seed = seed_arg;
            cfg.synthetic = true;
            save_csv(materialize_dataset(cfg), out_arg);
        });
    }

    if (app.got_subcommand(predict)) {
        return guarded([&] {
            const SavedModel m = load_model(model_path);
            const Dataset d = load_csv(data_path, m.scale);
            const auto preds = predict_dataset(m, d);
            std::string out = "company_id,period,rating,predicted\n";
            for (std::size_t i = 0; i < d.size(); ++i) {
                const auto& obs = d.observations[i];
                out += obs.company_id + ',' + to_string(obs.period) + ',' + obs.rating.label() +
                       ',' + preds[i].label() + '\n';
            }
            emit(out_arg, out);
        });
    }

    return guarded([&] {
        render_figures_from_csv(out_arg);
        if (!quiet) std::cout << summarize_report_dir(out_arg);
    });
}
