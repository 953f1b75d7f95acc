#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "swarmft/arena.hpp"
#include "swarmft/robot_model.hpp"
#include "swarmft/rng.hpp"

namespace swarmft {

enum class Algorithm { Gpf, Lpf };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view text);

inline constexpr int kBaseNode = -1;
inline constexpr int kNoParent = -2;

struct NetworkStatus {
    bool networked = false;
    int hop_parent = kNoParent;  // node index, or kBaseNode
    double hop_distance = 0.0;   // m, to hop_parent
    int hop_count = 0;           // robots in the chain including this one
};

/// Per-lineage resource bookkeeping. Replacements share their predecessor's lineage.
struct ForagingLedger {
    std::vector<int> delivered;
    std::vector<int> lost;
    int collected = 0;

    explicit ForagingLedger(std::size_t lineages = 0) : delivered(lineages, 0), lost(lineages, 0) {}

    void record_collect() { ++collected; }
    void record_delivery(int lineage) { ++delivered.at(static_cast<std::size_t>(lineage)); }
    void record_loss(int lineage) { ++lost.at(static_cast<std::size_t>(lineage)); }
    int total_delivered() const;
    int total_lost() const;
};

enum class ForageAction { None, Collect, Deposit };

/// Controller-private state carried between steps.
struct ControllerMemory {
    double explore_heading = 0.0;
    double explore_timer = 0.0;  // s until the next heading draw
    bool explore_fresh = true;
    int avoid_turn = 0;   // +1 left, -1 right while avoiding
    int detour_side = 0;  // preferred sweep side while the goal heading is blocked
};

struct BehaviorParams {
    double avoid_enter = 0.5;        // m, object distance that triggers Avoid
    double avoid_exit = 0.75;        // m, clearance to resume
    double collect_distance = 0.5;   // m, to nest edge
    double link_range = 3.0;         // m, LPF hop limit
    double explore_min_s = 2.0;
    double explore_max_s = 6.0;
    double heading_gain = 3.0;       // rad/s per rad
    double detour_clearance = 0.6;   // m, goal heading counts as blocked below this
    double lane_half_width = 0.3;    // m, lateral extent checked along a goal heading
};

/// Snapshot of the world a controller may sense, taken at step start.
struct WorldView {
    const ArenaSpec& arena;
    const ObstacleSet& obstacles;
    std::span<const Disc> bodies;  // every live robot, including the caller
    ModelConstants constants{};
};

struct Decision {
    WheelCommand command;
    BehaviorMode mode = BehaviorMode::Explore;
    ForageAction action = ForageAction::None;
};

/// Global-positioning forager: avoid > carry home > collect > approach > explore.
Decision gpf_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view, Rng& rng,
                  const BehaviorParams& params = {});

/// Local-positioning forager: forages as GPF only while localised through the network.
Decision lpf_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view,
                  const NetworkStatus& network, Rng& rng, const BehaviorParams& params = {});

/// Goal seeking to the base with avoidance; deposits any carried resource on arrival.
Decision return_for_service_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view,
                                 const BehaviorParams& params = {});

struct NetworkNode {
    Vec2 position;
    double sensor_range = 4.0;
};

/// Breadth-first localisation chains grown from the base band.
std::vector<NetworkStatus> compute_network(std::span<const NetworkNode> nodes, const ArenaSpec& arena,
                                           const ObstacleSet& obstacles, double link_range = 3.0,
                                           double base_range = 4.0);

/// Straight-line exploration re-drawing a uniform heading every U(2,6) s.
WheelCommand random_explore_policy(const RobotState& robot, ControllerMemory& memory, Rng& rng,
                                   const ModelConstants& constants = {}, const BehaviorParams& params = {});

/// Collect when within reach of a nest edge and empty-handed; deposit when carrying inside the base.
ForageAction collect_and_deposit(const RobotState& robot, std::span<const NestSpec> nests,
                                 const BaseRegion& base, double sensing_range,
                                 const BehaviorParams& params = {});

/// Wheel commands turning toward `heading` at up to `speed`.
WheelCommand steer_toward(const RobotState& robot, double heading, double speed,
                          const ModelConstants& constants, const BehaviorParams& params);

/// Forward-fan clearance as seen by the robot's own (possibly degraded) sensor.
struct FanScan {
    double nearest = 0.0;          // object distance from the body surface, m
    double nearest_angle = 0.0;    // relative to heading, rad
    double left_clearance = 0.0;
    double right_clearance = 0.0;
};

FanScan scan_fan(const RobotState& robot, const WorldView& view, std::span<const Disc> nearby);

}  // namespace swarmft
