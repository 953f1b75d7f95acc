#include "swarmft/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

namespace swarmft {

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    if (value == 0.0) return "0";
    return fmt::format("{}", value);
}

namespace {

std::string policy_label(const ExperimentConfig& c) {
    if (c.detector == DetectorKind::None) return "none";
    return std::string(to_string(c.resolution));
}

std::string detector_suffix(const ExperimentConfig& c) {
    switch (c.detector) {
        case DetectorKind::None: return "";
        case DetectorKind::Ideal: return fmt::format("_ideal{}", format_number(c.d0));
        case DetectorKind::Aapd: return "_aapd";
    }
    return "";
}

}  // namespace

std::string scenario_slug(const ExperimentConfig& c) {
    std::string s = fmt::format("{}_{}_n{}_{}", to_string(c.environment), to_string(c.algorithm), c.n_robots,
                                fault_label(c));
    if (c.fault.mode == FaultMode::Afflicted) s += "_" + format_number(c.fault.fraction);
    s += "_" + policy_label(c) + detector_suffix(c);
    return s;
}

SummaryRow summary_row(const ScenarioResult& r) {
    const auto& c = r.config;
    SummaryRow row;
    row.env = std::string(to_string(c.environment));
    row.algo = std::string(to_string(c.algorithm));
    row.n = c.n_robots;
    row.fault_class = fault_label(c);
    row.fraction = c.fault.mode == FaultMode::Afflicted ? c.fault.fraction : 0.0;
    row.policy = policy_label(c);
    if (c.detector == DetectorKind::Aapd) row.policy += "_aapd";
    row.d0 = c.detector == DetectorKind::Ideal ? c.d0 : std::nan("");
    row.median_r = r.normal.count > 0 ? r.normal.median : std::nan("");
    row.median_rstar = r.afflicted.count > 0 ? r.afflicted.median : std::nan("");
    row.iqr = r.normal.count > 0 ? r.normal.iqr() : std::nan("");
    return row;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = std::string(kSummaryHeader) + "\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.env, r.algo, r.n, r.fault_class,
                           format_number(r.fraction), r.policy, format_number(r.d0), format_number(r.median_r),
                           format_number(r.median_rstar), format_number(r.iqr));
    }
    return out;
}

std::string run_record_json(const ExperimentConfig& config, const RunMetrics& run, std::size_t replicate) {
    nlohmann::ordered_json j;
    j["scenario"] = scenario_slug(config);
    j["replicate"] = replicate;
    j["seed"] = run.seed;
    j["config"] = to_config_text(config);
    j["n_robots"] = run.n_robots;
    j["delivered"] = run.delivered;
    j["lost"] = run.lost;
    std::vector<int> afflicted(run.afflicted.begin(), run.afflicted.end());
    j["afflicted"] = afflicted;
    j["collected"] = run.collected;
    j["strandings"] = run.strandings;
    j["obstacles_created"] = run.obstacles_created;
    j["replacements"] = run.replacements;
    j["power_depletions"] = run.power_depletions;
    j["carrying_at_end"] = run.carrying_at_end;
    auto detections = nlohmann::ordered_json::array();
    for (const auto& e : run.detections) {
        detections.push_back({{"robot_id", e.robot_id},
                              {"lineage", e.lineage},
                              {"kind", std::string(to_string(e.kind))},
                              {"time_s", e.time_s},
                              {"delta", e.delta}});
    }
    j["detections"] = std::move(detections);
    auto log = nlohmann::ordered_json::array();
    for (const auto& s : run.service_log) {
        log.push_back({{"robot_id", s.robot_id},
                       {"lineage", s.lineage},
                       {"kind", std::string(to_string(s.kind))},
                       {"detect_time_s", s.detect_time_s},
                       {"action", std::string(to_string(s.action))},
                       {"outcome", std::string(to_string(s.outcome))},
                       {"outcome_time_s", s.outcome_time_s},
                       {"delta", s.delta},
                       {"x", s.position.x},
                       {"y", s.position.y}});
    }
    j["service_log"] = std::move(log);
    if (!run.telemetry.empty()) {
        auto tel = nlohmann::ordered_json::array();
        for (const auto& t : run.telemetry) {
            tel.push_back({t.time_s, t.live, t.carrying, t.resolving, t.obstacles, t.delivered});
        }
        j["telemetry_columns"] = {"time_s", "live", "carrying", "resolving", "obstacles", "delivered"};
        j["telemetry"] = std::move(tel);
    }
    return j.dump(1) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw OutputError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError(fmt::format("cannot open '{}' for writing", path.string()));
    out << text;
    if (!out) throw OutputError(fmt::format("write failed for '{}'", path.string()));
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d9d9d9", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};

double nice_ceiling(double v) {
    if (!(v > 0.0)) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (const double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (step * mag >= v) return step * mag;
    }
    return 10.0 * mag;
}

struct Frame {
    double width, height, left = 60, right = 20, top = 40, bottom = 90;
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

std::string axes(const Frame& f, const std::string& title, const std::string& y_label, double y_max) {
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        f.width, f.height);
    s += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", f.width / 2,
                     escape(title));
    for (int t = 0; t <= 5; ++t) {
        const double v = y_max * t / 5.0;
        const double y = f.top + f.plot_h() * (1.0 - t / 5.0);
        s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#eeeeee\"/>\n", f.left, y,
                         f.left + f.plot_w(), y);
        s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", f.left - 6, y + 4,
                         format_number(std::round(v * 1000.0) / 1000.0));
    }
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", f.left, f.top,
                     f.top + f.plot_h());
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", f.left,
                     f.top + f.plot_h(), f.left + f.plot_w());
    s += fmt::format("<text transform=\"translate(16,{:.2f}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
                     f.top + f.plot_h() / 2, escape(y_label));
    return s;
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series, const std::string& y_label) {
    double hi = 0.0;
    for (const auto& s : series) {
        for (const double v : s.values) {
            if (std::isfinite(v)) hi = std::max(hi, v);
        }
    }
    const double y_max = nice_ceiling(hi);
    const Frame f{std::max(480.0, 60.0 + categories.size() * (14.0 * series.size() + 16.0)), 360.0};
    std::string s = axes(f, title, y_label, y_max);
    const double group_w = f.plot_w() / std::max<std::size_t>(1, categories.size());
    const double bar_w = (group_w - 8.0) / std::max<std::size_t>(1, series.size());
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = f.left + c * group_w + 4.0;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const double v = c < series[k].values.size() ? series[k].values[c] : std::nan("");
            if (!std::isfinite(v)) continue;
            const double h = f.plot_h() * v / y_max;
            s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
                             "stroke=\"black\" stroke-width=\"0.5\"/>\n",
                             gx + k * bar_w, f.top + f.plot_h() - h, bar_w, h, kPalette[k % 6]);
        }
        s += fmt::format("<text transform=\"translate({:.2f},{:.2f}) rotate(-45)\" text-anchor=\"end\">{}</text>\n",
                         gx + group_w / 2, f.top + f.plot_h() + 14, escape(categories[c]));
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double lx = f.left + 10 + k * 130.0;
        s += fmt::format("<rect x=\"{:.2f}\" y=\"28\" width=\"10\" height=\"10\" fill=\"{}\" stroke=\"black\" "
                         "stroke-width=\"0.5\"/>\n<text x=\"{:.2f}\" y=\"37\">{}</text>\n",
                         lx, kPalette[k % 6], lx + 14, escape(series[k].label));
    }
    return s + "</svg>\n";
}

std::string box_plot_svg(const std::string& title, const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& groups, const std::string& y_label) {
    const Frame f{std::max(360.0, 80.0 + 120.0 * groups.size()), 360.0};
    double hi = 0.0;
    for (const auto& g : groups) {
        for (const double v : g) hi = std::max(hi, v);
    }
    const double y_max = nice_ceiling(hi);
    std::string s = axes(f, title, y_label, y_max);
    const auto y_of = [&](double v) { return f.top + f.plot_h() * (1.0 - v / y_max); };
    const double slot = f.plot_w() / std::max<std::size_t>(1, groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double cx = f.left + slot * (i + 0.5);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{} (n={})</text>\n", cx,
                         f.top + f.plot_h() + 16, escape(i < labels.size() ? labels[i] : ""), groups[i].size());
        if (groups[i].empty()) continue;
        const auto q = quartiles(groups[i]);
        const auto [mn, mx] = std::minmax_element(groups[i].begin(), groups[i].end());
        const double lo_w = std::max(*mn, q.q1 - 1.5 * q.iqr());
        const double hi_w = std::min(*mx, q.q3 + 1.5 * q.iqr());
        const double w = std::min(60.0, slot * 0.5);
        s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx,
                         y_of(lo_w), y_of(hi_w));
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
                         "stroke=\"black\"/>\n",
                         cx - w / 2, y_of(q.q3), w, y_of(q.q1) - y_of(q.q3), kPalette[i % 6]);
        s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"black\" "
                         "stroke-width=\"2\"/>\n",
                         cx - w / 2, cx + w / 2, y_of(q.median));
        for (const double v : groups[i]) {
            if (v < lo_w || v > hi_w) {
                s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n", cx,
                                 y_of(v));
            }
        }
    }
    return s + "</svg>\n";
}

void emit_results(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results) {
    std::vector<SummaryRow> rows;
    for (const auto& r : results) {
        rows.push_back(summary_row(r));
        const auto slug = scenario_slug(r.config);
        for (std::size_t i = 0; i < r.runs.size(); ++i) {
            write_text(out_dir / "runs" / fmt::format("{}_rep{:02}.json", slug, i),
                       run_record_json(r.config, r.runs[i], i));
        }
    }
    write_text(out_dir / "summary.csv", summary_csv(rows));
}

namespace {

std::string panel_key(const ExperimentConfig& c) {
    return fmt::format("{}_{}", to_string(c.environment), to_string(c.algorithm));
}

}  // namespace

void emit_baseline_plots(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results) {
    // One chart per (environment, algorithm): categories are (N, fault row).
    std::map<std::string, std::vector<const ScenarioResult*>> panels;
    for (const auto& r : results) panels[panel_key(r.config)].push_back(&r);
    for (const auto& [key, items] : panels) {
        std::vector<std::string> cats;
        BarSeries normal{"R (normal)", {}};
        BarSeries faulty{"R* (afflicted)", {}};
        for (const auto* r : items) {
            const auto& c = r->config;
            std::string label = fmt::format("N={} {}", c.n_robots, fault_label(c));
            if (c.fault.mode == FaultMode::Afflicted) label += fmt::format(" {}%", std::lround(c.fault.fraction * 100));
            cats.push_back(label);
            normal.values.push_back(r->normal.count ? r->normal.median : std::nan(""));
            faulty.values.push_back(r->afflicted.count ? r->afflicted.median : std::nan(""));
        }
        write_text(out_dir / "plots" / fmt::format("baseline_{}.svg", key),
                   bar_chart_svg("Baseline " + key, cats, {normal, faulty}, "median resources per robot"));
    }
}

void emit_d0_plots(const std::filesystem::path& out_dir, const std::vector<ScenarioResult>& results) {
    std::map<std::string, std::map<double, std::pair<double, double>>> panels;
    for (const auto& r : results) {
        const auto key = fmt::format("{}_n{}", panel_key(r.config), r.config.n_robots);
        auto& cell = panels[key][r.config.d0];
        cell = {std::nan(""), std::nan("")};
    }
    for (const auto& r : results) {
        const auto key = fmt::format("{}_n{}", panel_key(r.config), r.config.n_robots);
        auto& cell = panels[key][r.config.d0];
        (r.config.resolution == ResolutionPolicy::Predictive ? cell.first : cell.second) = r.overall.median;
    }
    for (const auto& [key, by_d0] : panels) {
        std::vector<std::string> cats;
        BarSeries tp{"predictive", {}};
        BarSeries tr{"reactive", {}};
        for (const auto& [d0, medians] : by_d0) {
            cats.push_back("d0=" + format_number(d0));
            tp.values.push_back(medians.first);
            tr.values.push_back(medians.second);
        }
        write_text(out_dir / "plots" / fmt::format("d0_sweep_{}.svg", key),
                   bar_chart_svg("Ideal detector threshold " + key, cats, {tp, tr}, "median resources per robot"));
    }
}

void emit_characterization(const std::filesystem::path& out_dir, const Characterization& result) {
    emit_results(out_dir, {result.scenario});
    std::string csv = "kind,count,q1,median,q3\n";
    for (const auto& [name, q] : {std::pair{"motor", result.motor}, std::pair{"sensor", result.sensor}}) {
        csv += fmt::format("{},{},{},{},{}\n", name, q.count, format_number(q.q1), format_number(q.median),
                           format_number(q.q3));
    }
    write_text(out_dir / "delta.csv", csv);
    write_text(out_dir / "plots" / "delta_boxplot.svg",
               box_plot_svg("Degradation at detection", {"motor", "sensor"},
                            {result.motor_delta, result.sensor_delta}, "delta"));
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out =
        "env,algo,n,median_TP,median_TR,median_TRstar,best_d0,diff_vs_TR_pct,diff_vs_TRstar_pct\n";
    for (const auto& r : rows) {
        const double tp = r.predictive.overall.median;
        const double tr = r.reactive.overall.median;
        const bool ideal = !r.ideal_reactive.empty();
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(r.environment), to_string(r.algorithm), r.n,
                           format_number(tp), format_number(tr),
                           ideal ? format_number(r.best_ideal_median) : "", ideal ? format_number(r.best_d0) : "",
                           format_number(std::round(proportional_difference(tp, tr))),
                           ideal ? format_number(std::round(proportional_difference(tp, r.best_ideal_median))) : "");
    }
    return out;
}

void emit_comparison(const std::filesystem::path& out_dir, const std::vector<ComparisonRow>& rows) {
    std::vector<ScenarioResult> all;
    for (const auto& r : rows) {
        all.push_back(r.predictive);
        all.push_back(r.reactive);
        for (const auto& i : r.ideal_reactive) all.push_back(i);
    }
    emit_results(out_dir, all);
    write_text(out_dir / "comparison.csv", comparison_csv(rows));
    std::vector<std::string> cats;
    BarSeries tp{"predictive", {}}, tr{"reactive", {}}, trs{"reactive, best ideal", {}};
    for (const auto& r : rows) {
        cats.push_back(fmt::format("{} {} N={}", to_string(r.environment), to_string(r.algorithm), r.n));
        tp.values.push_back(r.predictive.overall.median);
        tr.values.push_back(r.reactive.overall.median);
        trs.values.push_back(r.ideal_reactive.empty() ? std::nan("") : r.best_ideal_median);
    }
    std::vector<BarSeries> series{tp, tr};
    if (std::any_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return !r.ideal_reactive.empty(); })) {
        series.push_back(trs);
    }
    write_text(out_dir / "plots" / "comparison.svg",
               bar_chart_svg("Predictive vs reactive resolution", cats, series, "median resources per robot"));
}

}  // namespace swarmft
