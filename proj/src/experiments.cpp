#include "swarmft/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace swarmft {

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<RunMetrics> run_replicates(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    std::vector<RunMetrics> runs(static_cast<std::size_t>(config.replicates));
    parallel_for(runs.size(), threads, [&](std::size_t i) {
        runs[i] = run_single(config, derive_seed(config.master_seed, i));
    });
    return runs;
}

ScenarioResult summarise(const ExperimentConfig& config, std::vector<RunMetrics> runs) {
    ScenarioResult out;
    out.config = config;
    std::vector<double> normal, afflicted, overall;
    for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.delivered.size(); ++i) {
            const double v = run.delivered[i];
            (run.afflicted[i] ? afflicted : normal).push_back(v);
            overall.push_back(v);
        }
    }
    out.normal = quartiles(normal);
    out.afflicted = quartiles(afflicted);
    out.overall = quartiles(overall);
    out.runs = std::move(runs);
    return out;
}

ScenarioResult run_scenario(const ExperimentConfig& config, unsigned threads) {
    return summarise(config, run_replicates(config, threads));
}

std::string fault_label(const ExperimentConfig& config) {
    switch (config.fault.mode) {
        case FaultMode::None: return "none";
        case FaultMode::Random: return "random";
        case FaultMode::Afflicted: return std::string(to_string(config.fault.hardware));
    }
    return "none";
}

namespace {

ExperimentConfig grid_config(const GridOptions& grid, Environment env, Algorithm algo, int n) {
    ExperimentConfig c = grid.base;
    c.environment = env;
    c.algorithm = algo;
    c.n_robots = n;
    c.replicates = grid.replicates;
    c.master_seed = grid.master_seed;
    c.duration_s = grid.duration_s;
    return c;
}

// Flattens a list of configurations into one replicate job list so the pool stays busy.
std::vector<ScenarioResult> run_all(const std::vector<ExperimentConfig>& configs, unsigned threads) {
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    std::vector<std::vector<RunMetrics>> runs(configs.size());
    for (std::size_t s = 0; s < configs.size(); ++s) {
        configs[s].validate();
        runs[s].resize(static_cast<std::size_t>(configs[s].replicates));
        for (std::size_t r = 0; r < runs[s].size(); ++r) jobs.emplace_back(s, r);
    }
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
        const auto [s, r] = jobs[j];
        runs[s][r] = run_single(configs[s], derive_seed(configs[s].master_seed, r));
    });
    std::vector<ScenarioResult> out;
    for (std::size_t s = 0; s < configs.size(); ++s) out.push_back(summarise(configs[s], std::move(runs[s])));
    return out;
}

}  // namespace

std::vector<ScenarioResult> baseline_suite(const GridOptions& grid, const std::vector<double>& fractions) {
    std::vector<ExperimentConfig> configs;
    for (const auto env : grid.environments) {
        for (const auto algo : grid.algorithms) {
            for (const int n : grid.sizes) {
                ExperimentConfig c = grid_config(grid, env, algo, n);
                c.fault.mode = FaultMode::None;
                c.detector = DetectorKind::None;
                c.resolution = ResolutionPolicy::None;
                configs.push_back(c);
                for (const auto kind : {SignatureKind::Motor, SignatureKind::Sensor}) {
                    for (const double f : fractions) {
                        ExperimentConfig a = c;
                        a.fault.mode = FaultMode::Afflicted;
                        a.fault.hardware = kind;
                        a.fault.fraction = f;
                        a.fault.q_afflicted = 0.33;
                        configs.push_back(a);
                    }
                }
            }
        }
    }
    return run_all(configs, grid.threads);
}

std::vector<double> default_d0_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

std::vector<ScenarioResult> d0_sweep(const GridOptions& grid, const std::vector<double>& d0_values,
                                     const std::vector<ResolutionPolicy>& policies) {
    std::vector<ExperimentConfig> configs;
    for (const auto env : grid.environments) {
        for (const auto algo : grid.algorithms) {
            for (const int n : grid.sizes) {
                for (const auto policy : policies) {
                    for (const double d0 : d0_values) {
                        ExperimentConfig c = grid_config(grid, env, algo, n);
                        c.fault.mode = FaultMode::Random;
                        c.detector = DetectorKind::Ideal;
                        c.resolution = policy;
                        c.d0 = d0;
                        configs.push_back(c);
                    }
                }
            }
        }
    }
    return run_all(configs, grid.threads);
}

Characterization aapd_characterization(const GridOptions& grid, Environment env, Algorithm algo, int n,
                                       ResolutionPolicy policy) {
    ExperimentConfig c = grid_config(grid, env, algo, n);
    c.fault.mode = FaultMode::Random;
    c.detector = DetectorKind::Aapd;
    c.resolution = policy;
    Characterization out;
    out.scenario = run_all({c}, grid.threads).front();
    for (const auto& run : out.scenario.runs) {
        for (const auto& e : run.detections) {
            (e.kind == SignatureKind::Motor ? out.motor_delta : out.sensor_delta).push_back(e.delta);
        }
    }
    out.motor = quartiles(out.motor_delta);
    out.sensor = quartiles(out.sensor_delta);
    return out;
}

double proportional_difference(double a, double b) {
    if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (a - b) / b;
}

std::vector<ComparisonRow> resolution_comparison(const GridOptions& grid, bool with_ideal,
                                                 const std::vector<double>& d0_values) {
    std::vector<ExperimentConfig> configs;
    std::vector<ComparisonRow> rows;
    for (const auto env : grid.environments) {
        for (const auto algo : grid.algorithms) {
            for (const int n : grid.sizes) {
                ComparisonRow row;
                row.environment = env;
                row.algorithm = algo;
                row.n = n;
                rows.push_back(row);
                ExperimentConfig c = grid_config(grid, env, algo, n);
                c.fault.mode = FaultMode::Random;
                c.detector = DetectorKind::Aapd;
                c.resolution = ResolutionPolicy::Predictive;
                configs.push_back(c);
                c.resolution = ResolutionPolicy::Reactive;
                configs.push_back(c);
                if (!with_ideal) continue;
                for (const double d0 : d0_values) {
                    ExperimentConfig i = c;
                    i.detector = DetectorKind::Ideal;
                    i.d0 = d0;
                    configs.push_back(i);
                }
            }
        }
    }
    auto results = run_all(configs, grid.threads);
    std::size_t k = 0;
    for (auto& row : rows) {
        row.predictive = std::move(results[k++]);
        row.reactive = std::move(results[k++]);
        if (!with_ideal) continue;
        row.best_ideal_median = -std::numeric_limits<double>::infinity();
        for (const double d0 : d0_values) {
            auto& r = results[k++];
            // Ties keep the lower d0.
            if (r.overall.median > row.best_ideal_median) {
                row.best_ideal_median = r.overall.median;
                row.best_d0 = d0;
            }
            row.ideal_reactive.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace swarmft
