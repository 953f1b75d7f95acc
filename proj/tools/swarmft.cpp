#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "swarmft/config.hpp"
#include "swarmft/experiments.hpp"
#include "swarmft/outputs.hpp"
#include "swarmft/repertoire_io.hpp"

using namespace swarmft;

namespace {

struct Common {
    std::vector<std::string> envs;
    std::vector<std::string> algos;
    std::vector<int> sizes;
    std::string resolution;
    std::string detector;
    std::vector<double> d0;
    long long seed = -1;
    int replicates = 0;
    double duration = 0.0;
    std::string out = "out";
    std::string config_path;
    std::vector<std::string> overrides;
    unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--env", c.envs, "open|constrained (repeatable)");
    app->add_option("--algo", c.algos, "gpf|lpf (repeatable)");
    app->add_option("--n", c.sizes, "swarm size (repeatable)");
    app->add_option("--resolution", c.resolution, "none|predictive|reactive");
    app->add_option("--detector", c.detector, "none|ideal|aapd");
    app->add_option("--d0", c.d0, "ideal-detector threshold (repeatable)");
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--replicates", c.replicates, "replicates per scenario");
    app->add_option("--duration", c.duration, "simulated seconds per run");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--config", c.config_path, "key = value config file");
    app->add_option("--set", c.overrides, "extra key=value override (repeatable)");
    app->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

ExperimentConfig base_config(const Common& c) {
    ExperimentConfig cfg;
    if (!c.config_path.empty()) cfg = load_config_file(c.config_path);
    for (const auto& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("--set: expected key=value, got '{}'", kv));
        apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.envs.size() == 1) cfg.environment = parse_environment(c.envs.front());
    if (c.algos.size() == 1) cfg.algorithm = parse_algorithm(c.algos.front());
    if (c.sizes.size() == 1) cfg.n_robots = c.sizes.front();
    if (!c.resolution.empty()) cfg.resolution = parse_resolution(c.resolution);
    if (!c.detector.empty()) cfg.detector = parse_detector(c.detector);
    if (c.d0.size() == 1) cfg.d0 = c.d0.front();
    if (c.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(c.seed);
    if (c.replicates > 0) cfg.replicates = c.replicates;
    if (c.duration > 0.0) cfg.duration_s = c.duration;
    return cfg;
}

GridOptions grid_options(const Common& c, GridOptions grid = {}) {
    grid.base = base_config(c);
    if (!c.envs.empty()) {
        grid.environments.clear();
        for (const auto& e : c.envs) grid.environments.push_back(parse_environment(e));
    }
    if (!c.algos.empty()) {
        grid.algorithms.clear();
        for (const auto& a : c.algos) grid.algorithms.push_back(parse_algorithm(a));
    }
    if (!c.sizes.empty()) grid.sizes = c.sizes;
    grid.replicates = grid.base.replicates;
    grid.master_seed = grid.base.master_seed;
    grid.duration_s = grid.base.duration_s;
    grid.threads = c.threads;
    for (const int n : grid.sizes) {
        ExperimentConfig probe = grid.base;
        probe.n_robots = n;
        probe.detector = DetectorKind::None;
        probe.resolution = ResolutionPolicy::None;
        probe.validate();
    }
    return grid;
}

void print_summary(const std::vector<ScenarioResult>& results) {
    std::vector<SummaryRow> rows;
    for (const auto& r : results) rows.push_back(summary_row(r));
    std::fputs(summary_csv(rows).c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarm foraging simulator with fault detection and resolution"};
    app.require_subcommand(1);

    Common run_opts, base_opts, sweep_opts, char_opts, cmp_opts;
    auto* run = app.add_subcommand("run", "Replicates of a single configuration");
    add_common(run, run_opts);
    auto* baseline = app.add_subcommand("baseline", "Healthy and afflicted baselines without detection");
    add_common(baseline, base_opts);
    auto* sweep = app.add_subcommand("d0-sweep", "Ideal-detector threshold sweep for both policies");
    add_common(sweep, sweep_opts);
    auto* characterize = app.add_subcommand("characterize", "Degradation at detection for the immune detector");
    add_common(characterize, char_opts);
    auto* compare = app.add_subcommand("compare", "Predictive vs reactive resolution with the immune detector");
    add_common(compare, cmp_opts);
    bool no_ideal = false;
    compare->add_flag("--no-ideal", no_ideal, "skip the best-threshold ideal reactive reference");

    auto* gen = app.add_subcommand("gen-repertoire", "Build labelled faulty repertoires from training runs");
    std::string gen_algo = "gpf", gen_env = "open", gen_kind = "both", gen_out;
    std::uint64_t gen_seed = 0;
    int gen_runs = 12;
    double tol_motor = -1.0, tol_sensor = -1.0, healthy_min = -1.0, self_quantile = -1.0;
    double band_lo = -1.0, band_hi = -1.0;
    gen->add_option("--algo", gen_algo, "gpf|lpf");
    gen->add_option("--env", gen_env, "open|constrained");
    gen->add_option("--kind", gen_kind, "motor|sensor|both");
    gen->add_option("--seed", gen_seed, "training seed");
    gen->add_option("--runs", gen_runs, "training runs");
    gen->add_option("--out", gen_out, "output directory (default: shipped data directory)");
    gen->add_option("--motor-tolerance", tol_motor, "self tolerance for motor candidates");
    gen->add_option("--sensor-tolerance", tol_sensor, "self tolerance for sensor candidates");
    gen->add_option("--healthy-min", healthy_min, "lowest d still harvested as self behaviour");
    gen->add_option("--band-lo", band_lo, "lowest faulty d harvested");
    gen->add_option("--band-hi", band_hi, "highest faulty d harvested");
    gen->add_option("--self-quantile", self_quantile, "quantile of self matches compared with the tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = base_config(run_opts);
            const auto result = run_scenario(cfg, run_opts.threads);
            emit_results(run_opts.out, {result});
            print_summary({result});
        } else if (baseline->parsed()) {
            const auto results = baseline_suite(grid_options(base_opts));
            emit_results(base_opts.out, results);
            emit_baseline_plots(base_opts.out, results);
            print_summary(results);
        } else if (sweep->parsed()) {
            GridOptions grid = grid_options(sweep_opts);
            const auto d0s = sweep_opts.d0.empty() ? default_d0_grid() : sweep_opts.d0;
            const auto results = d0_sweep(grid, d0s);
            emit_results(sweep_opts.out, results);
            emit_d0_plots(sweep_opts.out, results);
            print_summary(results);
        } else if (characterize->parsed()) {
            GridOptions grid = grid_options(char_opts);
            const auto policy = char_opts.resolution.empty() ? ResolutionPolicy::None
                                                             : parse_resolution(char_opts.resolution);
            const auto result = aapd_characterization(grid, grid.environments.size() == 1 ? grid.environments[0]
                                                                                          : Environment::Open,
                                                      grid.algorithms.size() == 1 ? grid.algorithms[0] : Algorithm::Gpf,
                                                      grid.sizes.size() == 1 ? grid.sizes[0] : 10, policy);
            emit_characterization(char_opts.out, result);
            fmt::print("kind,count,q1,median,q3\nmotor,{},{},{},{}\nsensor,{},{},{},{}\n", result.motor.count,
                       format_number(result.motor.q1), format_number(result.motor.median),
                       format_number(result.motor.q3), result.sensor.count, format_number(result.sensor.q1),
                       format_number(result.sensor.median), format_number(result.sensor.q3));
        } else if (compare->parsed()) {
            GridOptions grid = grid_options(cmp_opts);
            const auto d0s = cmp_opts.d0.empty() ? default_d0_grid() : cmp_opts.d0;
            const auto rows = resolution_comparison(grid, !no_ideal, d0s);
            emit_comparison(cmp_opts.out, rows);
            std::fputs(comparison_csv(rows).c_str(), stdout);
        } else if (gen->parsed()) {
            std::vector<SignatureKind> kinds;
            if (gen_kind == "both") kinds = {SignatureKind::Motor, SignatureKind::Sensor};
            else kinds = {parse_signature_kind(gen_kind)};
            for (const auto kind : kinds) {
                RepertoireGenParams p = default_gen_params(kind);
                p.algorithm = parse_algorithm(gen_algo);
                p.environment = parse_environment(gen_env);
                p.seed = gen_seed;
                p.training_runs = gen_runs;
                p.self_runs = gen_runs;
                if (kind == SignatureKind::Motor && tol_motor >= 0.0) p.self_tolerance = tol_motor;
                if (kind == SignatureKind::Sensor && tol_sensor >= 0.0) p.self_tolerance = tol_sensor;
                if (healthy_min >= 0.0) p.healthy_min = healthy_min;
                if (self_quantile >= 0.0) p.self_quantile = self_quantile;
                if (band_lo >= 0.0) p.band_lo = band_lo;
                if (band_hi >= 0.0) p.band_hi = band_hi;
                const auto rep = generate_labelled_repertoire(p);
                ExperimentConfig cfg;
                cfg.algorithm = p.algorithm;
                cfg.environment = p.environment;
                auto path = labelled_repertoire_path(cfg, kind);
                if (!gen_out.empty()) path = std::filesystem::path(gen_out) / path.filename();
                save_repertoire(path, rep, gen_seed);
                fmt::print("{}: {} {} signatures\n", path.string(), rep.members.size(), to_string(kind));
            }
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
