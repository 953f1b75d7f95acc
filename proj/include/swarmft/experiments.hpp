#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swarmft/config.hpp"
#include "swarmft/simulation.hpp"
#include "swarmft/stats.hpp"

namespace swarmft {

/// Runs `count` independent jobs on up to `threads` workers; results land by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

unsigned default_threads();

/// Replicate i runs with derive_seed(master_seed, i).
std::vector<RunMetrics> run_replicates(const ExperimentConfig& config, unsigned threads = 0);

struct ScenarioResult {
    ExperimentConfig config;
    std::vector<RunMetrics> runs;
    Quartiles normal;     // per-lineage delivered counts of non-afflicted lineages, pooled
    Quartiles afflicted;  // same for afflicted lineages (count 0 when none)
    Quartiles overall;
};

ScenarioResult summarise(const ExperimentConfig& config, std::vector<RunMetrics> runs);
ScenarioResult run_scenario(const ExperimentConfig& config, unsigned threads = 0);

/// Label for the fault column: none, motor, sensor or random.
std::string fault_label(const ExperimentConfig& config);

struct GridOptions {
    std::vector<Environment> environments{Environment::Open, Environment::Constrained};
    std::vector<Algorithm> algorithms{Algorithm::Gpf, Algorithm::Lpf};
    std::vector<int> sizes{5, 10, 20};
    int replicates = 10;
    std::uint64_t master_seed = 0;
    double duration_s = 900.0;
    unsigned threads = 0;
    ExperimentConfig base;  // model, detection and path settings
};

/// Healthy and afflicted rows (motor and sensor at 20/40/60 %, q = 0.33), no detection.
std::vector<ScenarioResult> baseline_suite(const GridOptions& grid,
                                           const std::vector<double>& fractions = {0.2, 0.4, 0.6});

std::vector<double> default_d0_grid();

/// Ideal detector with random per-robot degradation, both policies at every d0.
std::vector<ScenarioResult> d0_sweep(const GridOptions& grid, const std::vector<double>& d0_values,
                                     const std::vector<ResolutionPolicy>& policies = {ResolutionPolicy::Predictive,
                                                                                     ResolutionPolicy::Reactive});

struct Characterization {
    ScenarioResult scenario;
    std::vector<double> motor_delta;
    std::vector<double> sensor_delta;
    Quartiles motor;
    Quartiles sensor;
};

/// AAPD on random per-robot degradation; pools delta by fault kind.
Characterization aapd_characterization(const GridOptions& grid, Environment env = Environment::Open,
                                       Algorithm algo = Algorithm::Gpf, int n = 10,
                                       ResolutionPolicy policy = ResolutionPolicy::None);

struct ComparisonRow {
    Environment environment = Environment::Open;
    Algorithm algorithm = Algorithm::Gpf;
    int n = 10;
    ScenarioResult predictive;
    ScenarioResult reactive;
    std::vector<ScenarioResult> ideal_reactive;  // one per d0, empty when skipped
    double best_d0 = 0.0;
    double best_ideal_median = 0.0;
};

/// Percentage difference of a against b; NaN when b is 0 and a is not, 0 when both are.
double proportional_difference(double a, double b);

/// AAPD-triggered T_P vs T_R per scenario, plus the best-d0 ideal T_R when `with_ideal`.
std::vector<ComparisonRow> resolution_comparison(const GridOptions& grid, bool with_ideal = true,
                                                 const std::vector<double>& d0_values = default_d0_grid());

}  // namespace swarmft
