#pragma once

#include <string>

#include "notchbench/evaluation.hpp"
#include "notchbench/runner.hpp"

namespace notchbench {

/// Writes the full report tree under out_dir: report_metrics.csv,
/// report_buckets.csv, report_conditional.csv, captured_changes.csv,
/// notch_hist_<method>.csv, models/<method>.nbm, figures/ (CSV always, SVG
/// when the config asks for it), and run_meta.txt. Metric files depend only
/// on the config and seed; timestamps and timings go to run_meta.txt.
void write_report(const EvalReport& report, const std::string& out_dir);

/// Two CSV lines comparing two rating streams:
/// pair,E,sd,E_abs,cond_E,cond_sd,cond_E_abs,n_joined. Conditional fields are
/// empty when every joined pair agrees.
std::string agency_comparison_csv(const std::string& pair_name, const AgencyComparison& cmp);

/// Rebuilds figures/*.svg from the figures/*.csv companions of a saved run.
void render_figures_from_csv(const std::string& out_dir);

/// Human-readable table of a saved run's report_metrics.csv.
std::string summarize_report_dir(const std::string& out_dir);

}  // namespace notchbench
