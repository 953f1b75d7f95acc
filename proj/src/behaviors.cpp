#include "swarmft/behaviors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swarmft {

std::string_view to_string(Algorithm algo) { return algo == Algorithm::Gpf ? "gpf" : "lpf"; }

Algorithm parse_algorithm(std::string_view text) {
    if (text == "gpf") return Algorithm::Gpf;
    if (text == "lpf") return Algorithm::Lpf;
    throw std::invalid_argument("algorithm: expected gpf|lpf, got '" + std::string(text) + "'");
}

int ForagingLedger::total_delivered() const {
    int total = 0;
    for (int v : delivered) total += v;
    return total;
}

int ForagingLedger::total_lost() const {
    int total = 0;
    for (int v : lost) total += v;
    return total;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<double, 5> kFanAngles = {-std::numbers::pi / 3, -std::numbers::pi / 6, 0.0,
                                              std::numbers::pi / 6, std::numbers::pi / 3};
constexpr double kDetourStep = 25.0 * std::numbers::pi / 180.0;
constexpr int kDetourSteps = 6;

double probe_limit(const RobotState& robot, const BehaviorParams& params) {
    return std::max(params.avoid_exit, params.detour_clearance) + robot.footprint_radius + 0.05;
}

std::vector<Disc> gather_nearby(const RobotState& robot, const WorldView& view, double reach) {
    std::vector<Disc> nearby;
    const Vec2 p = robot.pose.position;
    for (const auto& body : view.bodies) {
        if (body.center == p) continue;  // self
        const double lim = reach + body.radius;
        if ((body.center - p).squared_norm() <= lim * lim) nearby.push_back(body);
    }
    return nearby;
}

/// Object distance from the body surface along a relative bearing; infinity if nothing is sensed.
double sense_ray(const RobotState& robot, double heading, const WorldView& view, std::span<const Disc> nearby,
                 double sensing_range, double limit) {
    const double max_range = std::min(sensing_range, limit);
    if (max_range <= robot.footprint_radius) return kInf;
    const double hit = raycast_distance(robot.pose.position, heading, view.arena, view.obstacles, max_range, nearby);
    if (hit >= max_range) return kInf;
    return hit - robot.footprint_radius;
}

/// Free travel along a heading over a lane of the given half-width: the centre ray
/// plus two parallel rays along the lane edges.
double swept_clearance(const RobotState& robot, double heading, double half_width, const WorldView& view,
                       std::span<const Disc> nearby, double sensing_range, double limit) {
    double best = sense_ray(robot, heading, view, nearby, sensing_range, limit);
    const double max_range = std::min(sensing_range, limit);
    const Vec2 side{-std::sin(heading) * half_width, std::cos(heading) * half_width};
    for (const Vec2 origin : {robot.pose.position + side, robot.pose.position - side}) {
        const double hit = raycast_distance(origin, heading, view.arena, view.obstacles, max_range, nearby);
        if (hit < max_range) best = std::min(best, hit);
    }
    return best;
}

WheelCommand avoid_command(int turn, const ModelConstants& c) {
    // Half linear speed with the remaining wheel authority spent on turning.
    const double v = 0.5 * c.v_max;
    return turn > 0 ? WheelCommand{v - v, v + v} : WheelCommand{v + v, v - v};
}

int choose_turn(const FanScan& fan) {
    constexpr double eps = 1e-9;
    if (fan.nearest_angle > eps) return -1;
    if (fan.nearest_angle < -eps) return +1;
    return fan.left_clearance >= fan.right_clearance ? +1 : -1;
}

const NestSpec* nearest_visible_nest(const RobotState& robot, const WorldView& view, double sensing_range) {
    const NestSpec* best = nullptr;
    double best_edge = kInf;
    for (const auto& nest : view.arena.nests) {
        const double edge = nest.edge_distance(robot.pose.position);
        if (edge > sensing_range || edge >= best_edge) continue;
        if (edge > 0.0 && !line_of_sight(robot.pose.position, nest.center, view.arena, view.obstacles)) continue;
        best = &nest;
        best_edge = edge;
    }
    return best;
}

WheelCommand seek(const RobotState& robot, ControllerMemory& memory, Vec2 goal, const WorldView& view,
                  std::span<const Disc> nearby, double sensing_range, const BehaviorParams& params) {
    const auto& c = view.constants;
    const Vec2 to_goal = goal - robot.pose.position;
    const double desired = std::atan2(to_goal.y, to_goal.x);
    const double limit = probe_limit(robot, params);
    const auto clear = [&](double h) {
        return swept_clearance(robot, h, params.lane_half_width, view, nearby, sensing_range, limit) >
               params.detour_clearance;
    };
    if (clear(desired)) {
        memory.detour_side = 0;
        return steer_toward(robot, desired, c.v_max, c, params);
    }
    int side = memory.detour_side;
    if (side == 0) {
        const double left = sense_ray(robot, desired + kDetourStep, view, nearby, sensing_range, limit);
        const double right = sense_ray(robot, desired - kDetourStep, view, nearby, sensing_range, limit);
        side = left >= right ? +1 : -1;
    }
    for (int pass = 0; pass < 2; ++pass, side = -side) {
        for (int i = 1; i <= kDetourSteps; ++i) {
            const double h = desired + side * i * kDetourStep;
            if (clear(h)) {
                memory.detour_side = side;
                return steer_toward(robot, h, c.v_max, c, params);
            }
        }
    }
    return steer_toward(robot, desired + side * std::numbers::pi / 2, c.v_max, c, params);
}

Vec2 base_goal(const RobotState& robot, const ArenaSpec& arena) {
    const double margin = 2.0 * robot.footprint_radius;
    const double x = std::clamp(robot.pose.position.x, arena.bounds.min.x + margin, arena.bounds.max.x - margin);
    return {x, arena.base.top - 1.0};
}

/// Applies the obstacle-first rule with exit hysteresis. Returns true if avoiding.
bool avoidance(const RobotState& robot, ControllerMemory& memory, const FanScan& fan, const BehaviorParams& params,
               const ModelConstants& c, Decision& out) {
    const bool avoiding = robot.mode == BehaviorMode::Avoid;
    const double threshold = avoiding ? params.avoid_exit : params.avoid_enter;
    if (fan.nearest <= threshold) {
        if (!avoiding || memory.avoid_turn == 0) memory.avoid_turn = choose_turn(fan);
        out.command = avoid_command(memory.avoid_turn, c);
        out.mode = BehaviorMode::Avoid;
        return true;
    }
    if (avoiding) {
        memory.avoid_turn = 0;
        memory.explore_fresh = true;  // new heading after every avoidance
    }
    return false;
}

}  // namespace

FanScan scan_fan(const RobotState& robot, const WorldView& view, std::span<const Disc> nearby) {
    FanScan fan;
    fan.nearest = kInf;
    fan.left_clearance = kInf;
    fan.right_clearance = kInf;
    const double range = sensor_range(robot.degradation.sensor, view.constants.r_max);
    const double limit = probe_limit(robot, BehaviorParams{});
    for (const double rel : kFanAngles) {
        const double d = sense_ray(robot, robot.pose.heading + rel, view, nearby, range, limit);
        if (d < fan.nearest) {
            fan.nearest = d;
            fan.nearest_angle = rel;
        }
        if (rel > 0.0) fan.left_clearance = std::min(fan.left_clearance, d);
        if (rel < 0.0) fan.right_clearance = std::min(fan.right_clearance, d);
    }
    return fan;
}

WheelCommand steer_toward(const RobotState& robot, double heading, double speed, const ModelConstants& c,
                          const BehaviorParams& params) {
    const double err = wrap_angle(heading - robot.pose.heading);
    const double omega_limit = 2.0 * c.v_max / c.wheelbase;
    const double omega = std::clamp(params.heading_gain * err, -omega_limit, omega_limit);
    const double v = speed * std::max(0.0, std::cos(err));
    double left = v - 0.5 * omega * c.wheelbase;
    double right = v + 0.5 * omega * c.wheelbase;
    const double peak = std::max(std::abs(left), std::abs(right));
    if (peak > c.v_max) {
        left *= c.v_max / peak;
        right *= c.v_max / peak;
    }
    return {left, right};
}

WheelCommand random_explore_policy(const RobotState& robot, ControllerMemory& memory, Rng& rng,
                                   const ModelConstants& constants, const BehaviorParams& params) {
    memory.explore_timer -= constants.dt;
    if (memory.explore_fresh || memory.explore_timer <= 0.0) {
        memory.explore_heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
        memory.explore_timer = rng.uniform(params.explore_min_s, params.explore_max_s);
        memory.explore_fresh = false;
    }
    return steer_toward(robot, memory.explore_heading, constants.v_max, constants, params);
}

ForageAction collect_and_deposit(const RobotState& robot, std::span<const NestSpec> nests, const BaseRegion& base,
                                 double sensing_range, const BehaviorParams& params) {
    if (robot.carrying) return base.contains(robot.pose.position) ? ForageAction::Deposit : ForageAction::None;
    const double reach = std::min(params.collect_distance, sensing_range);
    for (const auto& nest : nests) {
        if (nest.edge_distance(robot.pose.position) <= reach) return ForageAction::Collect;
    }
    return ForageAction::None;
}

Decision gpf_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view, Rng& rng,
                  const BehaviorParams& params) {
    const auto& c = view.constants;
    const double range = sensor_range(robot.degradation.sensor, c.r_max);
    const auto nearby = gather_nearby(robot, view, probe_limit(robot, params));
    const FanScan fan = scan_fan(robot, view, nearby);

    Decision out;
    if (avoidance(robot, memory, fan, params, c, out)) return out;

    const ForageAction action = collect_and_deposit(robot, view.arena.nests, view.arena.base, range, params);
    if (robot.carrying) {
        if (action == ForageAction::Deposit) {
            memory.explore_fresh = true;
            return {{}, BehaviorMode::Explore, ForageAction::Deposit};
        }
        return {seek(robot, memory, base_goal(robot, view.arena), view, nearby, range, params),
                BehaviorMode::ReturnToBase, ForageAction::None};
    }
    if (action == ForageAction::Collect) return {{}, BehaviorMode::ReturnToBase, ForageAction::Collect};

    if (const NestSpec* nest = nearest_visible_nest(robot, view, range)) {
        return {seek(robot, memory, nest->center, view, nearby, range, params), BehaviorMode::ApproachNest,
                ForageAction::None};
    }
    return {random_explore_policy(robot, memory, rng, c, params), BehaviorMode::Explore, ForageAction::None};
}

Decision lpf_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view,
                  const NetworkStatus& network, Rng& rng, const BehaviorParams& params) {
    if (!network.networked) return {{}, BehaviorMode::Wait, ForageAction::None};
    return gpf_step(robot, memory, view, rng, params);
}

Decision return_for_service_step(const RobotState& robot, ControllerMemory& memory, const WorldView& view,
                                 const BehaviorParams& params) {
    const auto& c = view.constants;
    const double range = sensor_range(robot.degradation.sensor, c.r_max);
    Decision out;
    out.mode = BehaviorMode::ReturnForService;
    if (view.arena.base.contains(robot.pose.position)) {
        out.action = robot.carrying ? ForageAction::Deposit : ForageAction::None;
        return out;
    }
    const auto nearby = gather_nearby(robot, view, probe_limit(robot, params));
    const FanScan fan = scan_fan(robot, view, nearby);
    // Avoidance hysteresis is tracked through avoid_turn since the mode stays fixed.
    const double threshold = memory.avoid_turn != 0 ? params.avoid_exit : params.avoid_enter;
    if (fan.nearest <= threshold) {
        if (memory.avoid_turn == 0) memory.avoid_turn = choose_turn(fan);
        out.command = avoid_command(memory.avoid_turn, c);
        return out;
    }
    memory.avoid_turn = 0;
    out.command = seek(robot, memory, base_goal(robot, view.arena), view, nearby, range, params);
    return out;
}

std::vector<NetworkStatus> compute_network(std::span<const NetworkNode> nodes, const ArenaSpec& arena,
                                           const ObstacleSet& obstacles, double link_range, double base_range) {
    std::vector<NetworkStatus> status(nodes.size());
    std::deque<std::size_t> frontier;
    const double base_reach = std::min(link_range, base_range);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Vec2 p = nodes[i].position;
        const double d = arena.base.distance_to(p);
        if (d <= base_reach && line_of_sight(p, arena.base.nearest_point(p), arena, obstacles)) {
            status[i] = {true, kBaseNode, d, 1};
            frontier.push_back(i);
        }
    }
    while (!frontier.empty()) {
        const std::size_t k = frontier.front();
        frontier.pop_front();
        const double reach = std::min(link_range, nodes[k].sensor_range);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (status[j].networked) continue;
            const double d = distance(nodes[j].position, nodes[k].position);
            if (d > reach) continue;
            if (!line_of_sight(nodes[j].position, nodes[k].position, arena, obstacles)) continue;
            status[j] = {true, static_cast<int>(k), d, status[k].hop_count + 1};
            frontier.push_back(j);
        }
    }
    return status;
}

}  // namespace swarmft
