#include "notchbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "notchbench/errors.hpp"
#include "notchbench/text.hpp"

namespace fs = std::filesystem;

namespace notchbench {

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("short write to " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split(line, ','));
    }
    return rows;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else if (c == '\'')
            out += "&apos;";
        else
            out += c;
    }
    return out;
}

std::string safe_stem(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? std::string("company") : out;
}

std::string axis_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const char* kSeriesColors[] = {"#d55e00", "#0072b2", "#009e73",
                               "#cc79a7", "#e69f00", "#56b4e9"};

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<long long>& counts) {
    const int w = 760, h = 420, ml = 64, mr = 20, mt = 44, mb = 84;
    const int pw = w - ml - mr, ph = h - mt - mb;
    long long maxc = 1;
    for (long long c : counts) maxc = std::max(maxc, c);

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "' viewBox='0 0 " << w << ' ' << h << "'>\n"
      << "<rect width='" << w << "' height='" << h << "' fill='white'/>\n"
      << "<text x='" << w / 2 << "' y='26' text-anchor='middle' font-family='sans-serif' "
         "font-size='16'>"
      << esc(title) << "</text>\n";

    for (int g = 0; g <= 4; ++g) {
        const double y = mt + ph - ph * g / 4.0;
        s << "<line x1='" << ml << "' y1='" << y << "' x2='" << ml + pw << "' y2='" << y
          << "' stroke='#dddddd'/>\n"
          << "<text x='" << ml - 6 << "' y='" << y + 4
          << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
          << axis_number(static_cast<double>(maxc) * g / 4.0) << "</text>\n";
    }

    const std::size_t n = labels.size();
    const double bw = n ? static_cast<double>(pw) / static_cast<double>(n) : pw;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ml + bw * static_cast<double>(i);
        const double bh = ph * static_cast<double>(counts[i]) / static_cast<double>(maxc);
        s << "<rect x='" << x + bw * 0.1 << "' y='" << mt + ph - bh << "' width='" << bw * 0.8
          << "' height='" << bh << "' fill='#4878a8'/>\n"
          << "<text transform='translate(" << x + bw * 0.5 << ',' << mt + ph + 12
          << ") rotate(50)' font-family='sans-serif' font-size='10'>" << esc(labels[i])
          << "</text>\n";
    }
    s << "<line x1='" << ml << "' y1='" << mt + ph << "' x2='" << ml + pw << "' y2='" << mt + ph
      << "' stroke='black'/>\n"
      << "</svg>\n";
    return s.str();
}

const std::map<std::string, std::string> kRoleFill = {{"train", "#c9c9c9"},
                                                      {"validation", "#7f9fd4"},
                                                      {"test", "#e8a04a"},
                                                      {"holdout", "#d98c8c"},
                                                      {"none", "#f2f2f2"}};

/// One line per series over the company's quarters; y runs best (top) to
/// worst (bottom). The strip under the x axis shows each quarter's fold-0
/// role.
std::string timeline_svg(const std::string& title, const std::vector<std::string>& scale_labels,
                         const std::vector<std::string>& periods,
                         const std::vector<std::string>& roles,
                         const std::vector<std::string>& series_names,
                         const std::vector<std::vector<int>>& series_values) {
    const int w = 880, h = 460, ml = 76, mr = 150, mt = 44, mb = 88;
    const int pw = w - ml - mr, ph = h - mt - mb;
    const std::size_t S = scale_labels.size(), n = periods.size();

    auto xpos = [&](std::size_t i) {
        return n > 1 ? ml + static_cast<double>(pw) * static_cast<double>(i) /
                                static_cast<double>(n - 1)
                     : ml + pw / 2.0;
    };
    auto ypos = [&](int idx) {
        return S > 1 ? mt + static_cast<double>(ph) * static_cast<double>(idx - 1) /
                                static_cast<double>(S - 1)
                     : mt + ph / 2.0;
    };

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "' viewBox='0 0 " << w << ' ' << h << "'>\n"
      << "<rect width='" << w << "' height='" << h << "' fill='white'/>\n"
      << "<text x='" << (ml + pw / 2) << "' y='26' text-anchor='middle' "
         "font-family='sans-serif' font-size='16'>"
      << esc(title) << "</text>\n";

    const std::size_t ystep = std::max<std::size_t>(1, S / 10);
    for (std::size_t i = 1; i <= S; i += ystep) {
        const double y = ypos(static_cast<int>(i));
        s << "<line x1='" << ml << "' y1='" << y << "' x2='" << ml + pw << "' y2='" << y
          << "' stroke='#eeeeee'/>\n"
          << "<text x='" << ml - 6 << "' y='" << y + 4
          << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
          << esc(scale_labels[i - 1]) << "</text>\n";
    }

    const std::size_t xstep = std::max<std::size_t>(1, n / 8);
    for (std::size_t i = 0; i < n; i += xstep) {
        s << "<text transform='translate(" << xpos(i) << ',' << mt + ph + 30
          << ") rotate(45)' font-family='sans-serif' font-size='10'>" << esc(periods[i])
          << "</text>\n";
    }

    for (std::size_t i = 0; i < n && i < roles.size(); ++i) {
        const auto it = kRoleFill.find(roles[i]);
        const double x = xpos(i);
        s << "<rect x='" << x - 4 << "' y='" << mt + ph + 4 << "' width='8' height='8' fill='"
          << (it != kRoleFill.end() ? it->second : std::string("#f2f2f2")) << "'/>\n";
    }

    for (std::size_t k = 0; k < series_names.size(); ++k) {
        const bool actual = series_names[k] == "actual";
        const std::string color =
            actual ? "black" : kSeriesColors[(k ? k - 1 : 0) % (sizeof kSeriesColors /
                                                                sizeof *kSeriesColors)];
        std::ostringstream pts;
        for (std::size_t i = 0; i < series_values[k].size(); ++i)
            pts << (i ? " " : "") << xpos(i) << ',' << ypos(series_values[k][i]);
        s << "<polyline fill='none' stroke='" << color << "' stroke-width='"
          << (actual ? 2.2 : 1.4) << "' points='" << pts.str() << "'/>\n";
        if (actual)
            for (std::size_t i = 0; i < series_values[k].size(); ++i)
                s << "<circle cx='" << xpos(i) << "' cy='" << ypos(series_values[k][i])
                  << "' r='2.4' fill='black'/>\n";
        s << "<text x='" << ml + pw + 12 << "' y='" << mt + 14 + 16 * k << "' fill='" << color
          << "' font-family='sans-serif' font-size='12'>" << esc(series_names[k]) << "</text>\n";
    }

    s << "<line x1='" << ml << "' y1='" << mt + ph << "' x2='" << ml + pw << "' y2='" << mt + ph
      << "' stroke='black'/>\n"
      << "</svg>\n";
    return s.str();
}

long long misses_of(const NotchDistribution& d) {
    const auto it = d.counts.find(0);
    return d.n - (it == d.counts.end() ? 0 : it->second);
}

std::string metrics_csv(const EvalReport& rep) {
    std::string out = "fold,method,n_test,accuracy,dc,adc,sd\n";
    const std::size_t m = rep.config.methods.size();
    std::vector<double> acc(m, 0), dc(m, 0), adc(m, 0), sd(m, 0);
    std::vector<long long> nt(m, 0);
    for (const auto& fr : rep.folds) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& mr = fr.methods[j];
            out += std::to_string(fr.fold);
            out += ',';
            out += method_name(mr.kind);
            out += ',' + std::to_string(mr.dist.n) + ',' + fmt_double(mr.st.accuracy) + ',' +
                   fmt_double(mr.st.dc) + ',' + fmt_double(mr.st.adc) + ',' +
                   fmt_double(mr.st.sd) + '\n';
            acc[j] += mr.st.accuracy;
            dc[j] += mr.st.dc;
            adc[j] += mr.st.adc;
            sd[j] += mr.st.sd;
            nt[j] += mr.dist.n;
        }
    }
    const double k = static_cast<double>(rep.folds.size());
    for (std::size_t j = 0; j < m; ++j) {
        out += "mean,";
        out += method_name(rep.config.methods[j]);
        out += ',' + std::to_string(nt[j]) + ',' + fmt_double(acc[j] / k) + ',' +
               fmt_double(dc[j] / k) + ',' + fmt_double(adc[j] / k) + ',' +
               fmt_double(sd[j] / k) + '\n';
    }
    return out;
}

std::string buckets_csv(const EvalReport& rep) {
    std::string out = "fold,method,zero,one_abs,gt_one_abs\n";
    const std::size_t m = rep.config.methods.size();
    std::vector<double> z(m, 0), o(m, 0), g(m, 0);
    for (const auto& fr : rep.folds) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& mr = fr.methods[j];
            out += std::to_string(fr.fold);
            out += ',';
            out += method_name(mr.kind);
            out += ',' + fmt_double(mr.buckets.zero) + ',' + fmt_double(mr.buckets.one_abs) +
                   ',' + fmt_double(mr.buckets.gt_one_abs) + '\n';
            z[j] += mr.buckets.zero;
            o[j] += mr.buckets.one_abs;
            g[j] += mr.buckets.gt_one_abs;
        }
    }
    const double k = static_cast<double>(rep.folds.size());
    for (std::size_t j = 0; j < m; ++j) {
        out += "mean,";
        out += method_name(rep.config.methods[j]);
        out += ',' + fmt_double(z[j] / k) + ',' + fmt_double(o[j] / k) + ',' +
               fmt_double(g[j] / k) + '\n';
    }
    return out;
}

std::string conditional_csv(const EvalReport& rep) {
    std::string out = "fold,method,n_miss,cond_dc,cond_sd,cond_adc\n";
    const std::size_t m = rep.config.methods.size();
    std::vector<double> cdc(m, 0), csd(m, 0), cadc(m, 0);
    std::vector<long long> nm(m, 0);
    std::vector<int> present(m, 0);
    for (const auto& fr : rep.folds) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& mr = fr.methods[j];
            if (!mr.st.cond_dc) continue;
            out += std::to_string(fr.fold);
            out += ',';
            out += method_name(mr.kind);
            out += ',' + std::to_string(misses_of(mr.dist)) + ',' + fmt_double(*mr.st.cond_dc) +
                   ',' + fmt_double(*mr.st.cond_sd) + ',' + fmt_double(*mr.st.cond_adc) + '\n';
            cdc[j] += *mr.st.cond_dc;
            csd[j] += *mr.st.cond_sd;
            cadc[j] += *mr.st.cond_adc;
            nm[j] += misses_of(mr.dist);
            ++present[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!present[j]) continue;
        const double k = present[j];
        out += "mean,";
        out += method_name(rep.config.methods[j]);
        out += ',' + std::to_string(nm[j]) + ',' + fmt_double(cdc[j] / k) + ',' +
               fmt_double(csd[j] / k) + ',' + fmt_double(cadc[j] / k) + '\n';
    }
    return out;
}

std::string captured_csv(const EvalReport& rep) {
    std::string out = "fold,method,n_changes,exact,direction\n";
    const std::size_t m = rep.config.methods.size();
    std::vector<double> ex(m, 0), di(m, 0);
    std::vector<long long> nc(m, 0);
    std::vector<int> present(m, 0);
    for (const auto& fr : rep.folds) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto& mr = fr.methods[j];
            if (!mr.captured) continue;
            out += std::to_string(fr.fold);
            out += ',';
            out += method_name(mr.kind);
            out += ',' + std::to_string(mr.captured->n_changes) + ',' +
                   fmt_double(mr.captured->exact) + ',' + fmt_double(mr.captured->direction) +
                   '\n';
            ex[j] += mr.captured->exact;
            di[j] += mr.captured->direction;
            nc[j] += mr.captured->n_changes;
            ++present[j];
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!present[j]) continue;
        const double k = present[j];
        out += "mean,";
        out += method_name(rep.config.methods[j]);
        out += ',' + std::to_string(nc[j]) + ',' + fmt_double(ex[j] / k) + ',' +
               fmt_double(di[j] / k) + '\n';
    }
    return out;
}

std::string role_of(const EvalReport& rep, std::size_t row) {
    auto has = [row](const std::vector<std::size_t>& v) {
        return std::binary_search(v.begin(), v.end(), row);
    };
    if (!rep.folds.empty()) {
        if (has(rep.folds[0].train_rows)) return "train";
        if (has(rep.folds[0].validation_rows)) return "validation";
        if (has(rep.folds[0].test_rows)) return "test";
    }
    if (has(rep.holdout_rows)) return "holdout";
    return "none";
}

std::string meta_text(const EvalReport& rep) {
    std::ostringstream s;
    s << "digest=" << rep.config_digest << '\n';
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    s << "generated=" << stamp << '\n';
    s << "rows=" << rep.data.size() << " features=" << rep.data.feature_count()
      << " folds=" << rep.folds.size() << " holdout=" << rep.holdout_rows.size() << '\n';
    for (const auto& w : rep.warnings) s << "warning=" << w << '\n';
    for (const auto& fr : rep.folds) {
        s << "fold " << fr.fold << ": train=" << fr.train_rows.size()
          << " validation=" << fr.validation_rows.size() << " test=" << fr.test_rows.size()
          << '\n';
        for (const auto& mr : fr.methods) {
            s << "fold " << fr.fold << ' ' << method_name(mr.kind)
              << ": seconds=" << fmt_double(mr.fit_seconds);
            if (mr.validation_accuracy >= 0.0)
                s << " val_accuracy=" << fmt_double(mr.validation_accuracy);
            if (!mr.chosen.empty()) s << " chosen=" << mr.chosen;
            if (!mr.converged) s << " converged=0";
            s << '\n';
        }
    }
    s << "config:\n" << canonical_config_text(rep.config);
    return s.str();
}

}  // namespace

void write_report(const EvalReport& rep, const std::string& out_dir) {
    const fs::path root(out_dir);
    fs::create_directories(root / "figures");
    fs::create_directories(root / "models");

    write_file(root / "report_metrics.csv", metrics_csv(rep));
    write_file(root / "report_buckets.csv", buckets_csv(rep));
    write_file(root / "report_conditional.csv", conditional_csv(rep));
    write_file(root / "captured_changes.csv", captured_csv(rep));

    for (const MethodKind kind : rep.config.methods) {
        const NotchDistribution pooled = pooled_distribution(rep, kind);
        std::string hist = "notch,count,frequency\n";
        for (const auto& [i, c] : pooled.counts)
            hist += std::to_string(i) + ',' + std::to_string(c) + ',' +
                    fmt_double(static_cast<double>(c) / static_cast<double>(pooled.n)) + '\n';
        write_file(root / ("notch_hist_" + std::string(method_name(kind)) + ".csv"), hist);
    }

    for (const auto& sm : rep.models)
        save_model(sm, (root / "models" / (std::string(method_name(sm.kind)) + ".nbm")).string());

    // Figure data. The label column doubles as the scale definition (rows in
    // scale order), which is what re-rendering relies on.
    const ScalePtr scale = rep.data.scale;
    std::vector<long long> label_counts(scale->size(), 0);
    for (const auto& obs : rep.data.observations) ++label_counts[obs.rating.index() - 1];
    std::string dist_csv = "label,count\n";
    for (int i = 1; i <= scale->size(); ++i)
        dist_csv += scale->label_at(i) + ',' + std::to_string(label_counts[i - 1]) + '\n';
    write_file(root / "figures" / "rating_distribution.csv", dist_csv);

    std::string company = rep.config.timeline_company;
    if (company.empty() && rep.data.size() > 0) company = rep.data.observations[0].company_id;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < rep.data.size(); ++i)
        if (rep.data.observations[i].company_id == company) rows.push_back(i);
    std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        return rep.data.observations[a].period < rep.data.observations[b].period;
    });

    if (!rows.empty()) {
        const Dataset company_rows = rep.data.subset(rows);
        std::vector<std::string> series_names = {"actual"};
        std::vector<std::vector<int>> series_values(1);
        for (const auto& obs : company_rows.observations)
            series_values[0].push_back(obs.rating.index());
        for (const auto& sm : rep.models) {
            series_names.push_back(method_name(sm.kind));
            std::vector<int> vals;
            for (const auto& r : predict_dataset(sm, company_rows)) vals.push_back(r.index());
            series_values.push_back(std::move(vals));
        }

        std::string tl = "period,role";
        for (const auto& name : series_names) tl += ',' + name;
        tl += '\n';
        for (std::size_t i = 0; i < rows.size(); ++i) {
            tl += to_string(company_rows.observations[i].period) + ',' + role_of(rep, rows[i]);
            for (const auto& sv : series_values) tl += ',' + std::to_string(sv[i]);
            tl += '\n';
        }
        write_file(root / "figures" / ("timeline_" + safe_stem(company) + ".csv"), tl);
    }

    if (rep.config.svg) render_figures_from_csv(out_dir);

    write_file(root / "run_meta.txt", meta_text(rep));
}

std::string agency_comparison_csv(const std::string& pair_name, const AgencyComparison& cmp) {
    std::string out = "pair,E,sd,E_abs,cond_E,cond_sd,cond_E_abs,n_joined\n";
    out += pair_name + ',' + fmt_double(cmp.stats.dc) + ',' + fmt_double(cmp.stats.sd) + ',' +
           fmt_double(cmp.stats.adc) + ',';
    if (cmp.stats.cond_dc) out += fmt_double(*cmp.stats.cond_dc);
    out += ',';
    if (cmp.stats.cond_sd) out += fmt_double(*cmp.stats.cond_sd);
    out += ',';
    if (cmp.stats.cond_adc) out += fmt_double(*cmp.stats.cond_adc);
    out += ',' + std::to_string(cmp.n_joined) + '\n';
    return out;
}

void render_figures_from_csv(const std::string& out_dir) {
    const fs::path figures = fs::path(out_dir) / "figures";
    const fs::path dist_path = figures / "rating_distribution.csv";
    const auto dist_rows = read_csv_rows(dist_path);
    if (dist_rows.size() < 2 || dist_rows[0].size() != 2)
        throw CorruptModelError(dist_path.string() + " is not a label,count table");

    std::vector<std::string> labels;
    std::vector<long long> counts;
    for (std::size_t i = 1; i < dist_rows.size(); ++i) {
        if (dist_rows[i].size() != 2)
            throw CorruptModelError(dist_path.string() + " is not a label,count table");
        labels.push_back(dist_rows[i][0]);
        counts.push_back(std::stoll(dist_rows[i][1]));
    }
    write_file(figures / "rating_distribution.svg",
               bar_chart_svg("Rating distribution", labels, counts));

    for (const auto& entry : fs::directory_iterator(figures)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("timeline_", 0) != 0 || entry.path().extension() != ".csv") continue;
        const auto rows = read_csv_rows(entry.path());
        if (rows.size() < 2 || rows[0].size() < 3)
            throw CorruptModelError(entry.path().string() + " is not a timeline table");

        std::vector<std::string> series_names(rows[0].begin() + 2, rows[0].end());
        std::vector<std::string> periods, roles;
        std::vector<std::vector<int>> series_values(series_names.size());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size())
                throw CorruptModelError(entry.path().string() + " is not a timeline table");
            periods.push_back(rows[i][0]);
            roles.push_back(rows[i][1]);
            for (std::size_t k = 0; k < series_names.size(); ++k)
                series_values[k].push_back(std::stoi(rows[i][2 + k]));
        }
        const std::string stem = entry.path().stem().string();
        write_file(entry.path().parent_path() / (stem + ".svg"),
                   timeline_svg("Timeline " + stem.substr(9), labels, periods, roles,
                                series_names, series_values));
    }
}

std::string summarize_report_dir(const std::string& out_dir) {
    const auto rows = read_csv_rows(fs::path(out_dir) / "report_metrics.csv");
    if (rows.empty()) throw IoError("empty report_metrics.csv under " + out_dir);
    std::ostringstream s;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::string cell = row[j];
            if (j >= 3) {
                try {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.4f", parse_double(cell));
                    cell = buf;
                } catch (const ParseError&) {
                }
            }
            s << (j ? "  " : "") << cell;
            if (cell.size() < 10) s << std::string(10 - cell.size(), ' ');
        }
        s << '\n';
    }
    return s.str();
}

}  // namespace notchbench
