#include "swarmft/robot_model.hpp"

#include <algorithm>
#include <cmath>

namespace swarmft {

std::string_view to_string(BehaviorMode mode) {
    switch (mode) {
        case BehaviorMode::Explore: return "explore";
        case BehaviorMode::ApproachNest: return "approach_nest";
        case BehaviorMode::ReturnToBase: return "return_to_base";
        case BehaviorMode::Avoid: return "avoid";
        case BehaviorMode::Wait: return "wait";
        case BehaviorMode::ReturnForService: return "return_for_service";
        case BehaviorMode::Shutdown: return "shutdown";
    }
    return "unknown";
}

double velocity_cap(double d, double v_max) {
    return v_max / (1.0 + std::exp(-5.0 * (2.0 * d - 1.0)));
}

double motor_power_draw(double d, const PowerConstants& power) {
    return power.dp_motor_max / (1.0 + std::exp(-10.0 * ((1.0 - d) + 0.11)));
}

double sensor_range(double d_sensor, double r_max) {
    return r_max * std::sqrt(std::max(0.0, d_sensor));
}

double total_power_draw(const RobotState& state, const PowerConstants& power) {
    double draw = power.dp_sense;
    if (state.command.left != 0.0) draw += motor_power_draw(state.degradation.left, power);
    if (state.command.right != 0.0) draw += motor_power_draw(state.degradation.right, power);
    return draw;
}

namespace {

// Penetration-style clearance: negative when overlapping.
bool worsens(double clearance_from, double clearance_to) {
    return clearance_to < 0.0 && clearance_to < clearance_from;
}

double capped(double cmd, double cap) {
    return std::copysign(std::min(std::abs(cmd), cap), cmd);
}

}  // namespace

bool is_blocked(Vec2 from, Vec2 to, double radius, const Surroundings& world) {
    const auto& b = world.arena.bounds;
    const auto boundary_clearance = [&](Vec2 p) {
        return std::min({p.x - b.min.x, b.max.x - p.x, p.y - b.min.y, b.max.y - p.y}) - radius;
    };
    if (worsens(boundary_clearance(from), boundary_clearance(to))) return true;

    for (const auto& wall : world.arena.internal_walls) {
        if (worsens(distance_to_rect(from, wall) - radius, distance_to_rect(to, wall) - radius)) return true;
    }

    const auto hits = [&](const Disc& d) {
        const double reach = d.radius + radius;
        return worsens(distance(from, d.center) - reach, distance(to, d.center) - reach);
    };
    for (const auto& body : world.bodies) {
        if (hits(body)) return true;
    }
    bool blocked = false;
    world.obstacles.for_each_near({to.x - radius, to.y - radius}, {to.x + radius, to.y + radius},
                                  [&](const Disc& d) { blocked = blocked || hits(d); });
    return blocked;
}

KinematicsResult step_kinematics(RobotState& state, double dt, const Surroundings& world,
                                 const ModelConstants& constants, const PowerConstants& power) {
    KinematicsResult result;
    if (!state.alive || state.power.level <= 0.0) {
        state.alive = false;
        state.command = {};
        return result;
    }

    const double v_l = capped(state.command.left, velocity_cap(state.degradation.left, constants.v_max));
    const double v_r = capped(state.command.right, velocity_cap(state.degradation.right, constants.v_max));
    const double v = 0.5 * (v_l + v_r);
    const double omega = (v_r - v_l) / constants.wheelbase;

    const Vec2 from = state.pose.position;
    const Vec2 step = unit_vector(state.pose.heading) * (v * dt);
    Vec2 to = from + step;
    if (step.squared_norm() > 0.0 && is_blocked(from, to, state.footprint_radius, world)) {
        result.blocked = true;
        const Vec2 along_x{from.x + step.x, from.y};
        const Vec2 along_y{from.x, from.y + step.y};
        if (step.x != 0.0 && !is_blocked(from, along_x, state.footprint_radius, world)) {
            to = along_x;
        } else if (step.y != 0.0 && !is_blocked(from, along_y, state.footprint_radius, world)) {
            to = along_y;
        } else {
            to = from;
        }
    }
    state.pose.position = to;
    state.pose.heading = wrap_angle(state.pose.heading + omega * dt);

    result.linear_speed = distance(from, to) / dt;
    result.angular_speed = std::abs(omega);
    result.power_drawn = total_power_draw(state, power);

    state.power.level -= result.power_drawn * dt;
    if (state.power.level <= 0.0) {
        state.power.level = 0.0;
        state.alive = false;
        state.command = {};
    }
    return result;
}

void degrade_tick(DegradationState& state, const DegradationProcess& process, Rng& rng) {
    // Draw all three every tick so the stream position does not depend on q.
    const bool drop_l = rng.bernoulli(process.q_left);
    const bool drop_r = rng.bernoulli(process.q_right);
    const bool drop_s = rng.bernoulli(process.q_sensor);
    const auto dec = [&](double& d, bool drop) {
        // Snap to a 1e-9 grid so repeated 0.01 steps land on exact decimals.
        if (drop) d = std::max(0.0, std::round((d - process.decrement) * 1e9) / 1e9);
    };
    dec(state.left, drop_l);
    dec(state.right, drop_r);
    dec(state.sensor, drop_s);
}

}  // namespace swarmft
