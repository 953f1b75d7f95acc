#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>

#include "swarmft/arena.hpp"
#include "swarmft/geometry.hpp"
#include "swarmft/rng.hpp"

namespace swarmft {

/// Platform and simulation constants.
struct ModelConstants {
    double v_max = 0.22;             // m/s
    double r_max = 4.0;              // m
    double decrement = 0.01;         // per degradation event
    double dt = 1.0 / 6.0;           // s
    double wheelbase = 0.16;         // m
    double footprint_radius = 0.15;  // m
    double omega_max = 2.84;         // rad/s, signature normalisation
    double p0 = 1.0;
    double full_draw_lifetime_s = 300.0;

    int steps_per_second() const { return static_cast<int>(std::lround(1.0 / dt)); }
};

/// Per-second power budget split between motors and sensing.
struct PowerConstants {
    double dp_max = 1.0 / 300.0;
    double dp_motor_max = 0.4 / 300.0;  // each of left, right
    double dp_sense = 0.2 / 300.0;

    static PowerConstants from(const ModelConstants& c) {
        const double dp = c.p0 / c.full_draw_lifetime_s;
        return {dp, 0.4 * dp, 0.2 * dp};
    }
};

struct DegradationState {
    double left = 1.0;
    double right = 1.0;
    double sensor = 1.0;

    double min_motor() const { return std::min(left, right); }
    double min_all() const { return std::min({left, right, sensor}); }
};

struct PowerState {
    double level = 1.0;
};

/// Per-second probability that each coefficient drops by one decrement.
struct DegradationProcess {
    double q_left = 0.0;
    double q_right = 0.0;
    double q_sensor = 0.0;
    double decrement = 0.01;
};

enum class BehaviorMode { Explore, ApproachNest, ReturnToBase, Avoid, Wait, ReturnForService, Shutdown };

std::string_view to_string(BehaviorMode mode);

struct WheelCommand {
    double left = 0.0;   // m/s
    double right = 0.0;  // m/s
};

struct Pose {
    Vec2 position;
    double heading = 0.0;  // rad
};

struct RobotState {
    int id = 0;
    Pose pose;
    WheelCommand command;
    PowerState power;
    DegradationState degradation;
    bool carrying = false;
    BehaviorMode mode = BehaviorMode::Explore;
    double footprint_radius = 0.15;
    bool alive = true;

    Disc body() const { return {pose.position, footprint_radius}; }
};

/// Maximum achievable wheel speed for a motor with coefficient d.
double velocity_cap(double d, double v_max = 0.22);

/// Per-second draw of one motor with coefficient d.
double motor_power_draw(double d, const PowerConstants& power = {});

double sensor_range(double d_sensor, double r_max = 4.0);

/// Sensing always draws; each motor only while its wheel is commanded.
double total_power_draw(const RobotState& state, const PowerConstants& power = {});

/// Everything a moving robot can collide with.
struct Surroundings {
    const ArenaSpec& arena;
    const ObstacleSet& obstacles;
    std::span<const Disc> bodies;  // other live robots
};

struct KinematicsResult {
    double linear_speed = 0.0;   // realised |displacement| / dt
    double angular_speed = 0.0;  // realised |dtheta| / dt
    double power_drawn = 0.0;    // per-second rate applied this step
    bool blocked = false;
};

/// True if a disc at `to` overlaps geometry it is not already moving away from.
bool is_blocked(Vec2 from, Vec2 to, double radius, const Surroundings& world);

/// One explicit-Euler differential-drive step with degradation speed caps,
/// axis-separated collision clamping and power accounting.
KinematicsResult step_kinematics(RobotState& state, double dt, const Surroundings& world,
                                 const ModelConstants& constants = {},
                                 const PowerConstants& power = {});

/// One simulated second of stochastic degradation; coefficients clamp at 0.
void degrade_tick(DegradationState& state, const DegradationProcess& process, Rng& rng);

}  // namespace swarmft
