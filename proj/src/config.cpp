#include "notchbench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "notchbench/errors.hpp"
#include "notchbench/text.hpp"

namespace notchbench {

namespace {
int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int out = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key " + key + ": \"" + v + "\" is not an integer");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const unsigned long long out = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key " + key + ": \"" + v + "\" is not an unsigned integer");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        return parse_double(v);
    } catch (const ParseError&) {
        throw ConfigError("key " + key + ": \"" + v + "\" is not a number");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("key " + key + ": \"" + v + "\" is not a boolean");
}

std::vector<std::string> comma_list(const std::string& v) {
    std::vector<std::string> out;
    for (const auto& part : split(v, ',')) {
        const std::string t = trim(part);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

void validate(const ExperimentConfig& cfg) {
    if (!cfg.synthetic && cfg.csv_path.empty())
        throw ConfigError("data.source=csv requires data.csv");
    if (cfg.split_mode == SplitMode::temporal) {
        if (cfg.cutoff.empty()) throw ConfigError("split.mode=temporal requires split.cutoff");
        try {
            parse_period(cfg.cutoff);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("split.cutoff: ") + e.what());
        }
    }
    if (cfg.split_mode == SplitMode::random) {
        if (cfg.f_train < 0 || cfg.f_validation < 0 || cfg.f_test < 0 ||
            std::abs(cfg.f_train + cfg.f_validation + cfg.f_test - 1.0) > 1e-9)
            throw ConfigError("split fractions must be non-negative and sum to 1");
    }
    if (cfg.split_mode == SplitMode::kfold) {
        if (cfg.k < 2) throw ConfigError("split.k must be >= 2");
        if (cfg.holdout < 0.0 || cfg.holdout >= 1.0)
            throw ConfigError("split.holdout must lie in [0, 1)");
    }
    if (cfg.methods.empty()) throw ConfigError("at least one method must be selected");

    if (cfg.bdt.n_trees < 1 || cfg.rf.n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (cfg.rf.mtry < 0) throw ConfigError("rf.mtry must be >= 0 (0 = default)");
    if (cfg.bdt.min_samples_split < 2 || cfg.rf.min_samples_split < 2)
        throw ConfigError("min_samples_split must be >= 2");
    if (cfg.bdt.max_depth < 0 || cfg.rf.max_depth < 0)
        throw ConfigError("max_depth must be >= 0 (0 = unlimited)");

    if (cfg.mlp.hidden < 1) throw ConfigError("mlp.hidden must be >= 1");
    if (!(cfg.mlp.eta > 0.0)) throw ConfigError("mlp.eta must be positive");
    if (cfg.mlp.epochs < 1) throw ConfigError("mlp.epochs must be >= 1");
    if (cfg.mlp.patience < 0) throw ConfigError("mlp.patience must be >= 0");

    if (!(cfg.svm.c > 0.0)) throw ConfigError("svm.c must be positive");
    if (cfg.svm.kernel != "linear" && cfg.svm.kernel != "rbf" &&
        cfg.svm.kernel != "polynomial" && cfg.svm.kernel != "sigmoid")
        throw ConfigError("svm.kernel must be linear, rbf, polynomial or sigmoid");
    if (cfg.svm.gamma < 0.0) throw ConfigError("svm.gamma must be >= 0 (0 = 1/p)");
    if (cfg.svm.degree < 1) throw ConfigError("svm.degree must be >= 1");
    if (!(cfg.svm.tol > 0.0)) throw ConfigError("svm.tol must be positive");
    if (cfg.svm.max_passes < 1) throw ConfigError("svm.max_passes must be >= 1");
}
}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!seen.insert(key).second) throw ConfigError("duplicate key " + key);

        if (key == "data.source") {
            if (value == "synth")
                cfg.synthetic = true;
            else if (value == "csv")
                cfg.synthetic = false;
            else
                throw ConfigError("data.source must be synth or csv");
        } else if (key == "data.csv") {
            cfg.csv_path = value;
        } else if (key == "scale.name") {
            cfg.scale_name = value;
        } else if (key == "scale.labels") {
            cfg.scale_labels = comma_list(value);
            if (cfg.scale_labels.empty()) throw ConfigError("scale.labels is empty");
        } else if (key == "synth.companies") {
            cfg.synth.companies = to_int(key, value);
        } else if (key == "synth.quarters") {
            cfg.synth.quarters = to_int(key, value);
        } else if (key == "synth.persistence") {
            cfg.synth.persistence = to_double(key, value);
        } else if (key == "synth.marginals") {
            cfg.synth.marginals.clear();
            for (const auto& w : comma_list(value))
                cfg.synth.marginals.push_back(to_double(key, w));
        } else if (key == "synth.features") {
            cfg.synth.n_features = to_int(key, value);
        } else if (key == "synth.informative") {
            cfg.synth.informative = to_int(key, value);
        } else if (key == "synth.separation") {
            cfg.synth.separation = to_double(key, value);
        } else if (key == "synth.noise_sd") {
            cfg.synth.noise_sd = to_double(key, value);
        } else if (key == "synth.start") {
            try {
                cfg.synth.start = parse_period(value);
            } catch (const ParseError& e) {
                throw ConfigError(std::string("synth.start: ") + e.what());
            }
        } else if (key == "synth.sector") {
            cfg.synth.sector = value;
        } else if (key == "split.mode") {
            if (value == "random")
                cfg.split_mode = SplitMode::random;
            else if (value == "temporal")
                cfg.split_mode = SplitMode::temporal;
            else if (value == "kfold")
                cfg.split_mode = SplitMode::kfold;
            else
                throw ConfigError("split.mode must be random, temporal or kfold");
        } else if (key == "split.train") {
            cfg.f_train = to_double(key, value);
        } else if (key == "split.validation") {
            cfg.f_validation = to_double(key, value);
        } else if (key == "split.test") {
            cfg.f_test = to_double(key, value);
        } else if (key == "split.cutoff") {
            cfg.cutoff = value;
        } else if (key == "split.k") {
            cfg.k = to_int(key, value);
        } else if (key == "split.holdout") {
            cfg.holdout = to_double(key, value);
        } else if (key == "methods") {
            cfg.methods.clear();
            std::set<std::string> method_seen;
            for (const auto& name : comma_list(value)) {
                if (!method_seen.insert(name).second)
                    throw ConfigError("method " + name + " listed twice");
                cfg.methods.push_back(method_from_name(name));
            }
        } else if (key == "seed") {
            cfg.seed = to_u64(key, value);
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "parallel") {
            cfg.parallel = to_bool(key, value);
        } else if (key == "grid.enable") {
            cfg.grid = to_bool(key, value);
        } else if (key == "bdt.n_trees") {
            cfg.bdt.n_trees = to_int(key, value);
        } else if (key == "bdt.sample_size") {
            cfg.bdt.sample_size = static_cast<std::size_t>(to_u64(key, value));
        } else if (key == "bdt.min_samples_split") {
            cfg.bdt.min_samples_split = to_int(key, value);
        } else if (key == "bdt.max_depth") {
            cfg.bdt.max_depth = to_int(key, value);
        } else if (key == "rf.n_trees") {
            cfg.rf.n_trees = to_int(key, value);
        } else if (key == "rf.mtry") {
            cfg.rf.mtry = to_int(key, value);
        } else if (key == "rf.sample_size") {
            cfg.rf.sample_size = static_cast<std::size_t>(to_u64(key, value));
        } else if (key == "rf.min_samples_split") {
            cfg.rf.min_samples_split = to_int(key, value);
        } else if (key == "rf.max_depth") {
            cfg.rf.max_depth = to_int(key, value);
        } else if (key == "mlp.hidden") {
            cfg.mlp.hidden = to_int(key, value);
        } else if (key == "mlp.eta") {
            cfg.mlp.eta = to_double(key, value);
        } else if (key == "mlp.epochs") {
            cfg.mlp.epochs = to_int(key, value);
        } else if (key == "mlp.patience") {
            cfg.mlp.patience = to_int(key, value);
        } else if (key == "svm.c") {
            cfg.svm.c = to_double(key, value);
        } else if (key == "svm.kernel") {
            cfg.svm.kernel = value;
        } else if (key == "svm.gamma") {
            cfg.svm.gamma = to_double(key, value);
        } else if (key == "svm.coef0") {
            cfg.svm.coef0 = to_double(key, value);
        } else if (key == "svm.degree") {
            cfg.svm.degree = to_int(key, value);
        } else if (key == "svm.tol") {
            cfg.svm.tol = to_double(key, value);
        } else if (key == "svm.max_passes") {
            cfg.svm.max_passes = to_int(key, value);
        } else if (key == "report.svg") {
            cfg.svg = to_bool(key, value);
        } else if (key == "report.company") {
            cfg.timeline_company = value;
        } else {
            throw ConfigError("unknown key " + key);
        }
    }

    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
    // out_dir, report.svg and report.company are emission details; everything
    // that affects computed results is listed.
    std::vector<std::pair<std::string, std::string>> kv;
    auto add = [&kv](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };

    add("data.source", cfg.synthetic ? "synth" : "csv");
    add("data.csv", cfg.csv_path);
    {
        // the effective scale, so an explicit copy of the default hashes equal
        const ScalePtr scale = scale_from_config(cfg);
        add("scale.name", scale->name());
        std::string labels;
        for (std::size_t i = 0; i < scale->labels().size(); ++i) {
            if (i) labels += ',';
            labels += scale->labels()[i];
        }
        add("scale.labels", labels);
    }
    add("synth.companies", std::to_string(cfg.synth.companies));
    add("synth.quarters", std::to_string(cfg.synth.quarters));
    add("synth.persistence", fmt_double(cfg.synth.persistence));
    {
        std::string m;
        for (std::size_t i = 0; i < cfg.synth.marginals.size(); ++i) {
            if (i) m += ',';
            m += fmt_double(cfg.synth.marginals[i]);
        }
        add("synth.marginals", m);
    }
    add("synth.features", std::to_string(cfg.synth.n_features));
    add("synth.informative", std::to_string(cfg.synth.informative));
    add("synth.separation", fmt_double(cfg.synth.separation));
    add("synth.noise_sd", fmt_double(cfg.synth.noise_sd));
    add("synth.start", to_string(cfg.synth.start));
    add("synth.sector", cfg.synth.sector);
    add("split.mode", cfg.split_mode == SplitMode::random
                          ? "random"
                          : cfg.split_mode == SplitMode::temporal ? "temporal" : "kfold");
    add("split.train", fmt_double(cfg.f_train));
    add("split.validation", fmt_double(cfg.f_validation));
    add("split.test", fmt_double(cfg.f_test));
    add("split.cutoff", cfg.cutoff);
    add("split.k", std::to_string(cfg.k));
    add("split.holdout", fmt_double(cfg.holdout));
    {
        std::string m;
        for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
            if (i) m += ',';
            m += method_name(cfg.methods[i]);
        }
        add("methods", m);
    }
    add("seed", std::to_string(cfg.seed));
    add("parallel", cfg.parallel ? "1" : "0");
    add("grid.enable", cfg.grid ? "1" : "0");
    add("bdt.n_trees", std::to_string(cfg.bdt.n_trees));
    add("bdt.sample_size", std::to_string(cfg.bdt.sample_size));
    add("bdt.min_samples_split", std::to_string(cfg.bdt.min_samples_split));
    add("bdt.max_depth", std::to_string(cfg.bdt.max_depth));
    add("rf.n_trees", std::to_string(cfg.rf.n_trees));
    add("rf.mtry", std::to_string(cfg.rf.mtry));
    add("rf.sample_size", std::to_string(cfg.rf.sample_size));
    add("rf.min_samples_split", std::to_string(cfg.rf.min_samples_split));
    add("rf.max_depth", std::to_string(cfg.rf.max_depth));
    add("mlp.hidden", std::to_string(cfg.mlp.hidden));
    add("mlp.eta", fmt_double(cfg.mlp.eta));
    add("mlp.epochs", std::to_string(cfg.mlp.epochs));
    add("mlp.patience", std::to_string(cfg.mlp.patience));
    add("svm.c", fmt_double(cfg.svm.c));
    add("svm.kernel", cfg.svm.kernel);
    add("svm.gamma", fmt_double(cfg.svm.gamma));
    add("svm.coef0", fmt_double(cfg.svm.coef0));
    add("svm.degree", std::to_string(cfg.svm.degree));
    add("svm.tol", fmt_double(cfg.svm.tol));
    add("svm.max_passes", std::to_string(cfg.svm.max_passes));

    std::sort(kv.begin(), kv.end());
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    return fnv1a64_hex(canonical_config_text(cfg));
}

ScalePtr scale_from_config(const ExperimentConfig& cfg) {
    if (cfg.scale_labels.empty()) return default_sp_scale();
    return make_scale(cfg.scale_name, cfg.scale_labels);
}

Kernel kernel_from_config(const ExperimentConfig& cfg, std::size_t n_features) {
    const double gamma = cfg.svm.gamma > 0.0
                             ? cfg.svm.gamma
                             : 1.0 / static_cast<double>(std::max<std::size_t>(1, n_features));
    if (cfg.svm.kernel == "linear") return Kernel::linear();
    if (cfg.svm.kernel == "rbf") return Kernel::rbf(gamma);
    if (cfg.svm.kernel == "polynomial")
        return Kernel::polynomial(gamma, cfg.svm.coef0, cfg.svm.degree);
    return Kernel::sigmoid(gamma, cfg.svm.coef0);
}

}  // namespace notchbench
