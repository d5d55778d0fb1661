#include "notchbench/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "notchbench/errors.hpp"
#include "notchbench/text.hpp"

namespace notchbench {

const char* method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::baseline: return "baseline";
        case MethodKind::bdt: return "bdt";
        case MethodKind::rf: return "rf";
        case MethodKind::mlp: return "mlp";
        case MethodKind::svm_ovo: return "svm_ovo";
        case MethodKind::svm_ova: return "svm_ova";
    }
    return "unknown";
}

MethodKind method_from_name(const std::string& name) {
    if (name == "baseline") return MethodKind::baseline;
    if (name == "bdt") return MethodKind::bdt;
    if (name == "rf") return MethodKind::rf;
    if (name == "mlp") return MethodKind::mlp;
    if (name == "svm_ovo") return MethodKind::svm_ovo;
    if (name == "svm_ova") return MethodKind::svm_ova;
    throw ConfigError("unknown method \"" + name + "\"");
}

namespace {
constexpr char kMagic[] = "NBMODELv1";

std::string join_hex(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt_hex_double(v[i]);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string token;
    while (in >> token) out.push_back(parse_double(token));
    return out;
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::istringstream in(s);
    long long v;
    while (in >> v) out.push_back(v);
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

const char* kernel_name(Kernel::Type t) {
    switch (t) {
        case Kernel::Type::linear: return "linear";
        case Kernel::Type::rbf: return "rbf";
        case Kernel::Type::polynomial: return "polynomial";
        case Kernel::Type::sigmoid: return "sigmoid";
    }
    return "unknown";
}

Kernel::Type kernel_from_name(const std::string& name) {
    if (name == "linear") return Kernel::Type::linear;
    if (name == "rbf") return Kernel::Type::rbf;
    if (name == "polynomial") return Kernel::Type::polynomial;
    if (name == "sigmoid") return Kernel::Type::sigmoid;
    throw CorruptModelError("unknown kernel \"" + name + "\"");
}

void write_tree(std::ostream& out, const DecisionTree& tree, const std::string& prefix) {
    out << prefix << ".classes=" << join_ints(tree.classes) << '\n';
    out << prefix << ".n_features=" << tree.n_features << '\n';
    out << prefix << ".nodes=" << tree.nodes.size() << '\n';
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const TreeNode& n = tree.nodes[i];
        out << prefix << ".node." << i << '=';
        if (n.leaf) {
            out << "L " << n.label;
            for (long long c : n.counts) out << ' ' << c;
        } else {
            out << "I " << n.rule.feature << ' ' << fmt_hex_double(n.rule.threshold) << ' '
                << n.left << ' ' << n.right;
        }
        out << '\n';
    }
}

void write_binary_svm(std::ostream& out, const BinarySvmModel& m, const std::string& prefix) {
    out << prefix << ".constant=" << (m.constant ? 1 : 0) << '\n';
    if (m.constant) {
        out << prefix << ".constant_value=" << fmt_hex_double(m.constant_value) << '\n';
        return;
    }
    out << prefix << ".bias=" << fmt_hex_double(m.bias) << '\n';
    out << prefix << ".converged=" << (m.converged ? 1 : 0) << '\n';
    out << prefix << ".sv=" << m.support_x.size() << '\n';
    for (std::size_t i = 0; i < m.support_x.size(); ++i) {
        out << prefix << ".sv." << i << '=' << fmt_hex_double(m.alpha[i]) << ' '
            << m.support_y[i] << ' ' << m.support_rows[i];
        for (double v : m.support_x[i]) out << ' ' << fmt_hex_double(v);
        out << '\n';
    }
}

// Payload accessor with mandatory-key semantics; every miss is a corrupt file.
struct Fields {
    std::map<std::string, std::string> kv;

    const std::string& get(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw CorruptModelError("missing field " + key);
        return it->second;
    }
    long long get_int(const std::string& key) const {
        try {
            return std::stoll(get(key));
        } catch (const std::exception&) {
            throw CorruptModelError("bad integer in field " + key);
        }
    }
    double get_double(const std::string& key) const { return parse_double(get(key)); }
};

DecisionTree read_tree(const Fields& f, const std::string& prefix) {
    DecisionTree tree;
    for (long long c : parse_int_list(f.get(prefix + ".classes")))
        tree.classes.push_back(static_cast<int>(c));
    tree.n_features = static_cast<std::size_t>(f.get_int(prefix + ".n_features"));
    const long long n_nodes = f.get_int(prefix + ".nodes");
    for (long long i = 0; i < n_nodes; ++i) {
        const std::string line = f.get(prefix + ".node." + std::to_string(i));
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        TreeNode node;
        if (tag == "L") {
            node.leaf = true;
            in >> node.label;
            long long c;
            while (in >> c) node.counts.push_back(c);
        } else if (tag == "I") {
            std::string threshold;
            in >> node.rule.feature >> threshold >> node.left >> node.right;
            node.rule.threshold = parse_double(threshold);
        } else {
            throw CorruptModelError("bad node record in " + prefix);
        }
        if (in.fail() && !in.eof()) throw CorruptModelError("bad node record in " + prefix);
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

BinarySvmModel read_binary_svm(const Fields& f, const std::string& prefix, const Kernel& kernel,
                               double c) {
    BinarySvmModel m;
    m.kernel = kernel;
    m.c = c;
    if (f.get_int(prefix + ".constant") != 0) {
        m.constant = true;
        m.constant_value = f.get_double(prefix + ".constant_value");
        return m;
    }
    m.bias = f.get_double(prefix + ".bias");
    m.converged = f.get_int(prefix + ".converged") != 0;
    const long long n_sv = f.get_int(prefix + ".sv");
    for (long long i = 0; i < n_sv; ++i) {
        const std::string line = f.get(prefix + ".sv." + std::to_string(i));
        std::istringstream in(line);
        std::string alpha;
        int y;
        unsigned long long row;
        in >> alpha >> y >> row;
        if (in.fail()) throw CorruptModelError("bad support-vector record in " + prefix);
        m.alpha.push_back(parse_double(alpha));
        m.support_y.push_back(y);
        m.support_rows.push_back(static_cast<std::size_t>(row));
        std::vector<double> sv;
        std::string token;
        while (in >> token) sv.push_back(parse_double(token));
        m.support_x.push_back(std::move(sv));
    }
    return m;
}
}  // namespace

void save_model(const SavedModel& m, const std::string& path) {
    std::ostringstream out;
    out << kMagic << '\n';
    out << "type=" << method_name(m.kind) << '\n';

    out << "scale.name=" << m.scale->name() << '\n';
    out << "scale.labels=";
    for (int i = 1; i <= m.scale->size(); ++i) {
        if (i > 1) out << ',';
        out << m.scale->label_at(i);
    }
    out << '\n';

    out << "features=";
    for (std::size_t i = 0; i < m.feature_names.size(); ++i) {
        if (i) out << ',';
        out << m.feature_names[i];
    }
    out << '\n';

    out << "pre.fitted=" << (m.pre.fitted ? 1 : 0) << '\n';
    out << "pre.impute=" << join_hex(m.pre.impute) << '\n';
    out << "pre.mean=" << join_hex(m.pre.mean) << '\n';
    out << "pre.sd=" << join_hex(m.pre.sd) << '\n';
    out << "pre.all_missing=";
    for (std::size_t i = 0; i < m.pre.all_missing.size(); ++i) {
        if (i) out << ' ';
        out << static_cast<int>(m.pre.all_missing[i]);
    }
    out << '\n';

    switch (m.kind) {
        case MethodKind::baseline:
            out << "baseline.fallback=" << m.baseline_fallback << '\n';
            break;
        case MethodKind::bdt:
        case MethodKind::rf: {
            const Ensemble& e = m.ensemble;
            out << "ensemble.n_trees=" << e.trees.size() << '\n';
            out << "ensemble.mtry=" << e.params.mtry << '\n';
            out << "ensemble.sample_size=" << e.params.sample_size << '\n';
            out << "ensemble.bootstrap=" << (e.params.bootstrap ? 1 : 0) << '\n';
            out << "ensemble.seed=" << e.params.seed << '\n';
            out << "ensemble.n_features=" << e.n_features << '\n';
            for (std::size_t t = 0; t < e.trees.size(); ++t)
                write_tree(out, e.trees[t], "tree." + std::to_string(t));
            break;
        }
        case MethodKind::mlp: {
            out << "mlp.inputs=" << m.mlp.inputs() << '\n';
            out << "mlp.hidden=" << m.mlp.hidden() << '\n';
            out << "mlp.outputs=" << m.mlp.outputs() << '\n';
            for (std::size_t j = 0; j < m.mlp.hidden(); ++j)
                out << "mlp.w1." << j << '=' << join_hex(m.mlp.w1[j]) << '\n';
            out << "mlp.b1=" << join_hex(m.mlp.b1) << '\n';
            for (std::size_t k = 0; k < m.mlp.outputs(); ++k)
                out << "mlp.w2." << k << '=' << join_hex(m.mlp.w2[k]) << '\n';
            out << "mlp.b2=" << join_hex(m.mlp.b2) << '\n';
            break;
        }
        case MethodKind::svm_ovo:
        case MethodKind::svm_ova: {
            const MulticlassSvm& s = m.svm;
            out << "svm.mode=" << (s.mode == SvmMode::one_vs_one ? "ovo" : "ova") << '\n';
            out << "svm.classes=" << join_ints(s.classes) << '\n';
            out << "svm.c=" << fmt_hex_double(s.c) << '\n';
            out << "svm.kernel=" << kernel_name(s.kernel.type) << ' '
                << fmt_hex_double(s.kernel.gamma) << ' ' << fmt_hex_double(s.kernel.coef0) << ' '
                << s.kernel.degree << '\n';
            out << "svm.models=" << s.models.size() << '\n';
            for (std::size_t i = 0; i < s.models.size(); ++i) {
                const std::string prefix = "svm.model." + std::to_string(i);
                out << prefix << ".pos=" << s.models[i].pos_class << '\n';
                out << prefix << ".neg=" << s.models[i].neg_class << '\n';
                write_binary_svm(out, s.models[i].model, prefix);
            }
            break;
        }
    }

    const std::string payload = out.str();
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write " + path);
    file << payload << "checksum=" << fnv1a64_hex(payload) << '\n';
    if (!file) throw IoError("write failed for " + path);
}

SavedModel load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    const std::string content = buf.str();

    const std::size_t first_nl = content.find('\n');
    const std::string first_line =
        first_nl == std::string::npos ? content : content.substr(0, first_nl);
    if (first_line != kMagic) {
        if (first_line.rfind("NBMODEL", 0) == 0)
            throw VersionMismatchError("file has header \"" + first_line + "\", expected " +
                                       kMagic);
        throw CorruptModelError("not a model file (bad magic line)");
    }

    const std::string checksum_tag = "checksum=";
    const std::size_t tag_pos = content.rfind(checksum_tag);
    if (tag_pos == std::string::npos || tag_pos == 0 || content[tag_pos - 1] != '\n')
        throw CorruptModelError("missing checksum line (truncated file?)");
    const std::string payload = content.substr(0, tag_pos);
    const std::string stored = trim(content.substr(tag_pos + checksum_tag.size()));
    if (stored != fnv1a64_hex(payload)) throw CorruptModelError("checksum mismatch");

    Fields f;
    std::istringstream lines(payload);
    std::string line;
    std::getline(lines, line);  // magic
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw CorruptModelError("malformed payload line");
        f.kv[line.substr(0, eq)] = line.substr(eq + 1);
    }

    SavedModel m;
    try {
        m.kind = method_from_name(f.get("type"));
    } catch (const ConfigError& e) {
        throw CorruptModelError(e.what());
    }
    m.scale = make_scale(f.get("scale.name"), split(f.get("scale.labels"), ','));
    if (!f.get("features").empty()) m.feature_names = split(f.get("features"), ',');

    m.pre.fitted = f.get_int("pre.fitted") != 0;
    m.pre.impute = parse_double_list(f.get("pre.impute"));
    m.pre.mean = parse_double_list(f.get("pre.mean"));
    m.pre.sd = parse_double_list(f.get("pre.sd"));
    for (long long v : parse_int_list(f.get("pre.all_missing")))
        m.pre.all_missing.push_back(static_cast<std::uint8_t>(v));

    switch (m.kind) {
        case MethodKind::baseline:
            m.baseline_fallback = static_cast<int>(f.get_int("baseline.fallback"));
            break;
        case MethodKind::bdt:
        case MethodKind::rf: {
            Ensemble& e = m.ensemble;
            const long long n_trees = f.get_int("ensemble.n_trees");
            e.params.n_trees = static_cast<int>(n_trees);
            e.params.mtry = static_cast<int>(f.get_int("ensemble.mtry"));
            e.params.sample_size = static_cast<std::size_t>(f.get_int("ensemble.sample_size"));
            e.params.bootstrap = f.get_int("ensemble.bootstrap") != 0;
            e.params.seed = static_cast<std::uint64_t>(f.get_int("ensemble.seed"));
            e.n_features = static_cast<std::size_t>(f.get_int("ensemble.n_features"));
            for (long long t = 0; t < n_trees; ++t)
                e.trees.push_back(read_tree(f, "tree." + std::to_string(t)));
            e.oob.resize(e.trees.size());
            break;
        }
        case MethodKind::mlp: {
            const auto l = static_cast<std::size_t>(f.get_int("mlp.inputs"));
            const auto mm = static_cast<std::size_t>(f.get_int("mlp.hidden"));
            const auto n = static_cast<std::size_t>(f.get_int("mlp.outputs"));
            for (std::size_t j = 0; j < mm; ++j) {
                auto row = parse_double_list(f.get("mlp.w1." + std::to_string(j)));
                if (row.size() != l) throw CorruptModelError("mlp.w1 row length mismatch");
                m.mlp.w1.push_back(std::move(row));
            }
            m.mlp.b1 = parse_double_list(f.get("mlp.b1"));
            for (std::size_t k = 0; k < n; ++k) {
                auto row = parse_double_list(f.get("mlp.w2." + std::to_string(k)));
                if (row.size() != mm) throw CorruptModelError("mlp.w2 row length mismatch");
                m.mlp.w2.push_back(std::move(row));
            }
            m.mlp.b2 = parse_double_list(f.get("mlp.b2"));
            if (m.mlp.b1.size() != mm || m.mlp.b2.size() != n)
                throw CorruptModelError("mlp bias length mismatch");
            break;
        }
        case MethodKind::svm_ovo:
        case MethodKind::svm_ova: {
            MulticlassSvm& s = m.svm;
            s.mode = f.get("svm.mode") == "ovo" ? SvmMode::one_vs_one : SvmMode::one_vs_all;
            for (long long c : parse_int_list(f.get("svm.classes")))
                s.classes.push_back(static_cast<int>(c));
            s.c = f.get_double("svm.c");
            {
                std::istringstream in(f.get("svm.kernel"));
                std::string name, gamma, coef0;
                in >> name >> gamma >> coef0 >> s.kernel.degree;
                if (in.fail()) throw CorruptModelError("bad kernel record");
                s.kernel.type = kernel_from_name(name);
                s.kernel.gamma = parse_double(gamma);
                s.kernel.coef0 = parse_double(coef0);
            }
            const long long n_models = f.get_int("svm.models");
            for (long long i = 0; i < n_models; ++i) {
                const std::string prefix = "svm.model." + std::to_string(i);
                SvmSubmodel sub;
                sub.pos_class = static_cast<int>(f.get_int(prefix + ".pos"));
                sub.neg_class = static_cast<int>(f.get_int(prefix + ".neg"));
                sub.model = read_binary_svm(f, prefix, s.kernel, s.c);
                s.models.push_back(std::move(sub));
            }
            break;
        }
    }
    return m;
}

int predict_saved(const SavedModel& m, const std::vector<double>& x, int prev) {
    switch (m.kind) {
        case MethodKind::baseline: return prev >= 1 ? prev : m.baseline_fallback;
        case MethodKind::bdt:
        case MethodKind::rf: return predict_ensemble(m.ensemble, x);
        case MethodKind::mlp: return predict_mlp(m.mlp, x);
        case MethodKind::svm_ovo:
        case MethodKind::svm_ova: return predict_svm(m.svm, x);
    }
    throw BadParamsError("unknown model kind");
}

}  // namespace notchbench
