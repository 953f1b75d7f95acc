#include "swarmft/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "swarmft/repertoire_io.hpp"

namespace swarmft {

Simulation::Simulation(const ExperimentConfig& config, std::uint64_t seed, RunResources resources)
    : world_(make_world(config, seed)),
      seed_(seed),
      resources_(resources),
      total_steps_(static_cast<std::size_t>(std::llround(config.duration_s / config.model.dt))),
      steps_per_second_(config.model.steps_per_second()) {}

bool Simulation::records_windows() const {
    return world_.config.detector == DetectorKind::Aapd || static_cast<bool>(observer_);
}

void Simulation::step() {
    World& w = world_;
    const auto& c = w.config.model;
    const std::size_t n = w.robots.size();
    const bool lpf = w.config.algorithm == Algorithm::Lpf;

    std::vector<Disc> bodies(n);
    for (std::size_t i = 0; i < n; ++i) bodies[i] = w.robots[i].state.body();
    const WorldView view{w.arena, w.obstacles, bodies, c};

    std::vector<NetworkStatus> network;
    if (lpf) {
        std::vector<NetworkNode> nodes(n);
        for (std::size_t i = 0; i < n; ++i) {
            nodes[i] = {w.robots[i].state.pose.position, sensor_range(w.robots[i].state.degradation.sensor, c.r_max)};
        }
        network = compute_network(nodes, w.arena, w.obstacles, BehaviorParams{}.link_range, c.r_max);
    }

    // Decisions read the step-start snapshot only.
    free_to_move_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        Robot& r = w.robots[i];
        Decision dec;
        if (r.resolving) {
            dec = return_for_service_step(r.state, r.memory, view);
        } else if (lpf) {
            dec = lpf_step(r.state, r.memory, view, network[i], w.rng);
        } else {
            dec = gpf_step(r.state, r.memory, view, w.rng);
        }
        r.state.command = dec.command;
        r.state.mode = r.resolving ? BehaviorMode::ReturnForService : dec.mode;
        if (dec.action == ForageAction::Collect && !r.state.carrying) {
            r.state.carrying = true;
            w.ledger.record_collect();
        } else if (dec.action == ForageAction::Deposit && r.state.carrying) {
            r.state.carrying = false;
            w.ledger.record_delivery(r.lineage);
        }
        if (r.resolving && w.arena.base.contains(r.state.pose.position)) complete_service(w, i);

        const auto& d = r.state.degradation;
        const bool mobile = std::min(velocity_cap(d.left, c.v_max), velocity_cap(d.right, c.v_max)) >= kImmobileCap;
        free_to_move_[i] = mobile && (!lpf || r.resolving || network[i].networked);
    }

    const bool record = records_windows();
    std::vector<std::array<double, 3>> samples(record ? n : 0);
    std::vector<Disc> others;
    others.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        others.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) others.push_back(bodies[j]);
        }
        Robot& r = w.robots[i];
        const auto res = step_kinematics(r.state, c.dt, Surroundings{w.arena, w.obstacles, others}, c, w.power);
        bodies[i] = r.state.body();
        if (record) {
            samples[i] = motor_sample(res.linear_speed, res.angular_speed, res.power_drawn, c.v_max, c.omega_max,
                                      w.power.dp_max);
        }
    }

    if (record) {
        std::vector<GammaNode> nodes;
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i < n; ++i) {
            if (!w.robots[i].state.alive) continue;
            live.push_back(i);
            nodes.push_back({bodies[i].center, sensor_range(w.robots[i].state.degradation.sensor, c.r_max)});
        }
        for (std::size_t k = 0; k < live.size(); ++k) {
            const double gamma = gamma_value(k, nodes, w.arena, w.obstacles, c.r_max);
            w.robots[live[k]].detector.record(samples[live[k]], gamma / c.r_max);
        }
    }

    // Power depletion: the robot stays where it stopped as an obstacle.
    for (std::size_t i = n; i-- > 0;) {
        if (w.robots[i].state.alive) continue;
        free_to_move_.erase(free_to_move_.begin() + static_cast<std::ptrdiff_t>(i));
        if (w.robots[i].resolving) {
            strand(w, i);
        } else {
            ++w.power_depletions;
            make_inert(w, i);
        }
    }

    ++w.steps;
    if (w.steps % static_cast<std::size_t>(steps_per_second_) == 0) per_second();
    if (record) detector_clock();
}

void Simulation::per_second() {
    World& w = world_;
    for (auto& r : w.robots) degrade_tick(r.state.degradation, r.process, w.rng);
    for (std::size_t i = w.robots.size(); i-- > 0;) {
        if (check_stranding(w, i) && i < free_to_move_.size()) {
            free_to_move_.erase(free_to_move_.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    if (w.config.detector == DetectorKind::Ideal) {
        handle_events(IdealDetector{w.config.d0}.tick(w.robots, w.time_s()));
    }
    flush_pending_spawns(w);
    if (w.config.record_telemetry) {
        TelemetrySample t;
        t.time_s = w.time_s();
        t.live = static_cast<int>(w.robots.size());
        for (const auto& r : w.robots) {
            t.carrying += r.state.carrying ? 1 : 0;
            t.resolving += r.resolving ? 1 : 0;
        }
        t.obstacles = static_cast<int>(w.obstacles.size());
        t.delivered = w.ledger.total_delivered();
        telemetry_.push_back(t);
    }
}

void Simulation::detector_clock() {
    World& w = world_;
    const auto& params = w.config.detection;
    const bool capture = w.steps % params.capture_steps == 0;
    if (!capture) return;

    if (observer_) {
        for (const auto& r : w.robots) {
            for (const auto kind : {SignatureKind::Motor, SignatureKind::Sensor}) {
                if (auto sig = r.detector.latest_signature(kind)) observer_(r, *sig);
            }
        }
    }
    if (w.config.detector != DetectorKind::Aapd) return;

    const bool lpf = w.config.algorithm == Algorithm::Lpf;
    const auto movers = std::count(free_to_move_.begin(), free_to_move_.end(), true);
    std::vector<DetectorSlot> slots(w.robots.size());
    for (std::size_t i = 0; i < w.robots.size(); ++i) {
        auto& r = w.robots[i];
        const bool free = i < free_to_move_.size() && free_to_move_[i];
        slots[i] = {&r.detector, !r.resolving, !lpf || (free && movers >= 5)};
    }
    const auto raised = detection_tick(slots, w.steps, params, resources_.y_motor, resources_.y_sensor);
    std::vector<DetectionEvent> events;
    for (const auto& k : raised) events.push_back(make_event(w.robots[k.slot], k.kind, w.time_s()));
    handle_events(std::move(events));
}

void Simulation::handle_events(std::vector<DetectionEvent> events) {
    World& w = world_;
    for (const auto& e : events) {
        const auto it = std::find_if(w.robots.begin(), w.robots.end(),
                                     [&](const Robot& r) { return r.state.id == e.robot_id; });
        if (it == w.robots.end()) continue;
        const auto index = static_cast<std::size_t>(it - w.robots.begin());
        if (w.robots[index].resolving) continue;
        // Reactive removal shifts the live list; keep the mobility flags aligned.
        if (resolve_detection(w, index, e)) {
            if (index < free_to_move_.size()) free_to_move_.erase(free_to_move_.begin() + static_cast<std::ptrdiff_t>(index));
            free_to_move_.resize(w.robots.size(), true);
        }
    }
}

void Simulation::run() {
    while (!finished()) step();
}

RunMetrics Simulation::metrics() const {
    const World& w = world_;
    RunMetrics m;
    m.seed = seed_;
    m.n_robots = w.config.n_robots;
    m.delivered = w.ledger.delivered;
    m.lost = w.ledger.lost;
    m.afflicted = w.afflicted_lineage;
    m.detections = w.detections;
    m.service_log = w.service_log;
    m.collected = w.ledger.collected;
    m.strandings = w.strandings;
    m.obstacles_created = static_cast<int>(w.obstacles.size());
    m.replacements = w.replacements;
    m.power_depletions = w.power_depletions;
    for (const auto& r : w.robots) m.carrying_at_end += r.state.carrying ? 1 : 0;
    m.telemetry = telemetry_;
    return m;
}

RunMetrics run_single(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    RunResources resources;
    if (config.detector == DetectorKind::Aapd) {
        resources.y_motor = &cached_repertoire(labelled_repertoire_path(config, SignatureKind::Motor), SignatureKind::Motor);
        resources.y_sensor =
            &cached_repertoire(labelled_repertoire_path(config, SignatureKind::Sensor), SignatureKind::Sensor);
    }
    Simulation sim(config, seed, resources);
    sim.run();
    return sim.metrics();
}

}  // namespace swarmft
