#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "swarmft/config.hpp"
#include "swarmft/detection.hpp"
#include "swarmft/resolution.hpp"
#include "swarmft/world.hpp"

namespace swarmft {

struct TelemetrySample {
    double time_s = 0.0;
    int live = 0;
    int carrying = 0;
    int resolving = 0;
    int obstacles = 0;
    int delivered = 0;
};

struct RunMetrics {
    std::uint64_t seed = 0;
    int n_robots = 0;
    std::vector<int> delivered;  // per lineage
    std::vector<int> lost;
    std::vector<bool> afflicted;
    std::vector<DetectionEvent> detections;
    std::vector<ServiceRecord> service_log;
    int collected = 0;
    int strandings = 0;
    int obstacles_created = 0;
    int replacements = 0;
    int power_depletions = 0;
    int carrying_at_end = 0;
    std::vector<TelemetrySample> telemetry;
};

/// Labelled repertoires shared read-only by every run.
struct RunResources {
    const LabelledRepertoire* y_motor = nullptr;
    const LabelledRepertoire* y_sensor = nullptr;
};

/// Called on every 5 s boundary for each live robot with its latest signature
/// of each kind; used to harvest training signatures.
using SignatureObserver = std::function<void(const Robot&, const Signature&)>;

class Simulation {
public:
    Simulation(const ExperimentConfig& config, std::uint64_t seed, RunResources resources = {});

    /// One dt step followed by the per-second and detector clocks.
    void step();
    void run();
    bool finished() const { return world_.steps >= total_steps_; }

    World& world() { return world_; }
    const World& world() const { return world_; }
    RunMetrics metrics() const;

    void set_signature_observer(SignatureObserver observer) { observer_ = std::move(observer); }

private:
    void per_second();
    void detector_clock();
    void handle_events(std::vector<DetectionEvent> events);
    bool records_windows() const;

    World world_;
    std::uint64_t seed_;
    RunResources resources_;
    std::size_t total_steps_;
    int steps_per_second_;
    std::vector<bool> free_to_move_;  // by live index, from the last step
    SignatureObserver observer_;
    std::vector<TelemetrySample> telemetry_;
};

RunMetrics run_single(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace swarmft
