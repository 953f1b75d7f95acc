#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "swarmft/experiments.hpp"

namespace swarmft {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest text that parses back to the same double; empty for NaN.
std::string format_number(double value);

inline const char* kSummaryHeader = "env,algo,n,fault_class,fraction,policy,d0,median_R,median_Rstar,iqr";

struct SummaryRow {
    std::string env;
    std::string algo;
    int n = 0;
    std::string fault_class;
    double fraction = 0.0;
    std::string policy;
    double d0 = 0.0;  // NaN unless the ideal detector is used
    double median_r = 0.0;
    double median_rstar = 0.0;  // NaN without afflicted robots
    double iqr = 0.0;
};

SummaryRow summary_row(const ScenarioResult& result);
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Per-run record: the scenario's config text plus every RunMetrics field.
std::string run_record_json(const ExperimentConfig& config, const RunMetrics& run, std::size_t replicate);

/// Stable file stem for a scenario, e.g. open_gpf_n10_motor_0.2_none.
std::string scenario_slug(const ExperimentConfig& config);

struct BarSeries {
    std::string label;
    std::vector<double> values;
};

/// Grouped bar chart; one group per category, one bar per series.
std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& y_label);

/// Box plots (whiskers at 1.5 IQR clipped to the data range), one per group.
std::string box_plot_svg(const std::string& title, const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& groups, const std::string& y_label);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes runs/*.json, summary.csv and any extra files under `out_dir`.
void emit_results(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results);

void emit_baseline_plots(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results);
void emit_d0_plots(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results);
void emit_characterization(const std::filesystem::path& out_dir, const Characterization& result);

/// comparison.csv (difference table) plus summary rows and plots for every scenario run.
void emit_comparison(const std::filesystem::path& out_dir, const std::vector<ComparisonRow>& rows);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

}  // namespace swarmft
