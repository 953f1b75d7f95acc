#include "swarmft/resolution.hpp"

namespace swarmft {

std::vector<DetectionEvent> IdealDetector::tick(std::vector<Robot>& robots, double time_s) const {
    std::vector<DetectionEvent> events;
    for (auto& r : robots) {
        if (!r.ideal_armed) continue;
        const auto& d = r.state.degradation;
        if (d.min_motor() < d0) {
            events.push_back(make_event(r, SignatureKind::Motor, time_s));
        } else if (d.sensor < d0) {
            events.push_back(make_event(r, SignatureKind::Sensor, time_s));
        } else {
            continue;
        }
        r.ideal_armed = false;
    }
    return events;
}

DetectionEvent make_event(const Robot& robot, SignatureKind kind, double time_s) {
    const auto& d = robot.state.degradation;
    return {robot.state.id, robot.lineage, kind, time_s, kind == SignatureKind::Motor ? d.min_motor() : d.sensor};
}

bool resolve_detection(World& world, std::size_t index, const DetectionEvent& event) {
    Robot& r = world.robots.at(index);
    world.detections.push_back(event);
    ServiceRecord rec;
    rec.robot_id = event.robot_id;
    rec.lineage = event.lineage;
    rec.kind = event.kind;
    rec.detect_time_s = event.time_s;
    rec.action = world.config.resolution;
    rec.delta = event.delta;
    rec.position = r.state.pose.position;
    world.service_log.push_back(rec);
    const std::size_t entry = world.service_log.size() - 1;

    switch (world.config.resolution) {
        case ResolutionPolicy::None:
            world.service_log[entry].outcome = ServiceOutcome::Unresolved;
            world.service_log[entry].outcome_time_s = event.time_s;
            return false;
        case ResolutionPolicy::Predictive:
            apply_predictive(world, index, entry);
            return false;
        case ResolutionPolicy::Reactive:
            apply_reactive(world, index, entry);
            return true;
    }
    return false;
}

void apply_predictive(World& world, std::size_t index, std::size_t log_entry) {
    Robot& r = world.robots.at(index);
    r.resolving = true;
    r.service_entry = log_entry;
    r.immobile_seconds = 0;
    r.state.mode = BehaviorMode::ReturnForService;
    r.memory.avoid_turn = 0;
    r.memory.detour_side = 0;
    // Already home: serviced on the spot, after any deposit.
    if (world.arena.base.contains(r.state.pose.position)) {
        if (r.state.carrying) {
            r.state.carrying = false;
            world.ledger.record_delivery(r.lineage);
        }
        complete_service(world, index);
    }
}

void apply_reactive(World& world, std::size_t index, std::size_t log_entry) {
    Robot& r = world.robots.at(index);
    const int lineage = r.lineage;
    auto& rec = world.service_log.at(log_entry);
    rec.outcome_time_s = world.time_s();
    if (world.arena.base.contains(r.state.pose.position)) {
        rec.outcome = ServiceOutcome::Removed;
        remove_robot(world, index);
    } else {
        rec.outcome = ServiceOutcome::Replaced;
        make_inert(world, index);
    }
    spawn_robot(world, lineage);
}

void complete_service(World& world, std::size_t index) {
    Robot& r = world.robots.at(index);
    r.state.degradation = {};
    r.state.power.level = world.config.model.p0;
    r.state.mode = BehaviorMode::Explore;
    r.state.command = {};
    r.detector.reset();
    r.ideal_armed = true;
    r.resolving = false;
    r.immobile_seconds = 0;
    r.memory = {};
    if (r.service_entry) {
        auto& rec = world.service_log.at(*r.service_entry);
        rec.outcome = ServiceOutcome::Serviced;
        rec.outcome_time_s = world.time_s();
        r.service_entry.reset();
    }
}

void strand(World& world, std::size_t index) {
    Robot& r = world.robots.at(index);
    if (r.service_entry) {
        auto& rec = world.service_log.at(*r.service_entry);
        rec.outcome = ServiceOutcome::Stranded;
        rec.outcome_time_s = world.time_s();
    }
    ++world.strandings;
    make_inert(world, index);
}

bool check_stranding(World& world, std::size_t index) {
    Robot& r = world.robots.at(index);
    if (!r.resolving) return false;
    const double v_max = world.config.model.v_max;
    const auto& d = r.state.degradation;
    const bool immobile = std::min(velocity_cap(d.left, v_max), velocity_cap(d.right, v_max)) < kImmobileCap ||
                          r.state.power.level <= 0.0;
    r.immobile_seconds = immobile ? r.immobile_seconds + 1 : 0;
    if (r.immobile_seconds < kStrandSeconds) return false;
    strand(world, index);
    return true;
}

void flush_pending_spawns(World& world) {
    if (world.pending_spawns.empty()) return;
    auto queued = std::move(world.pending_spawns);
    world.pending_spawns.clear();
    for (const int lineage : queued) spawn_robot(world, lineage);
}

}  // namespace swarmft
