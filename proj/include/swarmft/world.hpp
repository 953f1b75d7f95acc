#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swarmft/arena.hpp"
#include "swarmft/behaviors.hpp"
#include "swarmft/config.hpp"
#include "swarmft/detection.hpp"
#include "swarmft/rng.hpp"
#include "swarmft/robot_model.hpp"

namespace swarmft {

enum class ServiceOutcome { Pending, Serviced, Replaced, Removed, Stranded, Unresolved };

std::string_view to_string(ServiceOutcome outcome);

/// One entry per detection event.
struct ServiceRecord {
    int robot_id = 0;
    int lineage = 0;
    SignatureKind kind = SignatureKind::Motor;
    double detect_time_s = 0.0;
    ResolutionPolicy action = ResolutionPolicy::None;
    ServiceOutcome outcome = ServiceOutcome::Pending;
    double outcome_time_s = 0.0;
    double delta = 0.0;
    Vec2 position;
};

struct Robot {
    RobotState state;
    DegradationProcess process;
    ControllerMemory memory;
    Detector detector;
    int lineage = 0;
    bool afflicted = false;
    bool ideal_armed = true;
    bool resolving = false;                   // returning for service
    std::optional<std::size_t> service_entry;  // pending ServiceLog index
    int immobile_seconds = 0;
    double spawn_time_s = 0.0;
};

/// Mutable simulation state. Robots become part of `obstacles` when they go inert.
struct World {
    ExperimentConfig config;
    ArenaSpec arena;
    ObstacleSet obstacles;
    std::vector<Robot> robots;  // live robots only
    ForagingLedger ledger;
    std::vector<bool> afflicted_lineage;
    std::vector<ServiceRecord> service_log;
    std::vector<DetectionEvent> detections;
    std::vector<int> pending_spawns;  // lineages awaiting a free base position
    PowerConstants power;
    Rng rng;
    std::size_t steps = 0;
    int next_id = 0;
    int strandings = 0;
    int replacements = 0;
    int power_depletions = 0;

    double time_s() const { return static_cast<double>(steps) * config.model.dt; }
};

/// Initial swarm: lineages 0..N-1 in rows across the base band, facing the nests.
World make_world(const ExperimentConfig& config, std::uint64_t seed);

/// Positions of the initial rows for n robots.
std::vector<Vec2> initial_positions(int n);

/// Nearest collision-free base point to (5, 1), scanning a 0.1 m lattice.
std::optional<Vec2> free_base_position(const World& world);

/// Degradation probabilities for a fresh robot of `lineage`, drawn from the run's distribution.
DegradationProcess sample_process(World& world, int lineage);

/// Adds a fresh robot for `lineage`; queues the spawn if the base is full.
bool spawn_robot(World& world, int lineage);

/// Turns robot `index` into a static obstacle and drops it from the live list.
/// A carried resource is counted lost.
void make_inert(World& world, std::size_t index);

/// Removes robot `index` without leaving an obstacle; a carried resource is lost.
void remove_robot(World& world, std::size_t index);

}  // namespace swarmft
