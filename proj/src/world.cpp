#include "swarmft/world.hpp"

#include <cmath>

namespace swarmft {

std::string_view to_string(ServiceOutcome outcome) {
    switch (outcome) {
        case ServiceOutcome::Pending: return "pending";
        case ServiceOutcome::Serviced: return "serviced";
        case ServiceOutcome::Replaced: return "replaced";
        case ServiceOutcome::Removed: return "removed";
        case ServiceOutcome::Stranded: return "stranded";
        case ServiceOutcome::Unresolved: return "unresolved";
    }
    return "unknown";
}

std::vector<Vec2> initial_positions(int n) {
    std::vector<Vec2> out;
    if (n <= 0) return out;
    const int rows = n <= 10 ? 1 : (n <= 20 ? 2 : 3);
    const double row_y[3][3] = {{1.0, 0.0, 0.0}, {0.6, 1.4, 0.0}, {0.5, 1.0, 1.5}};
    const int per_row = (n + rows - 1) / rows;
    for (int i = 0; i < n; ++i) {
        const int row = i / per_row;
        const int col = i % per_row;
        const int in_row = std::min(per_row, n - row * per_row);
        out.push_back({(col + 0.5) * 10.0 / in_row, row_y[rows - 1][row]});
    }
    return out;
}

namespace {

bool position_free(const World& world, Vec2 p, double radius) {
    const auto& b = world.arena.bounds;
    if (p.x - radius < b.min.x || p.x + radius > b.max.x || p.y - radius < b.min.y || p.y + radius > b.max.y) {
        return false;
    }
    for (const auto& wall : world.arena.internal_walls) {
        if (distance_to_rect(p, wall) < radius) return false;
    }
    for (const auto& r : world.robots) {
        if (distance(p, r.state.pose.position) < radius + r.state.footprint_radius) return false;
    }
    bool clear = true;
    world.obstacles.for_each_near({p.x - radius, p.y - radius}, {p.x + radius, p.y + radius}, [&](const Disc& d) {
        if (distance(p, d.center) < radius + d.radius) clear = false;
    });
    return clear;
}

}  // namespace

std::optional<Vec2> free_base_position(const World& world) {
    const double radius = world.config.model.footprint_radius;
    const Vec2 anchor{5.0, 1.0};
    std::optional<Vec2> best;
    double best_d = 0.0;
    for (int iy = 0; iy <= 20; ++iy) {
        for (int ix = 0; ix <= 100; ++ix) {
            const Vec2 p{ix * 0.1, iy * 0.1};
            if (!world.arena.base.contains(p)) continue;
            const double d = distance(p, anchor);
            if (best && d >= best_d) continue;
            if (!position_free(world, p, radius)) continue;
            best = p;
            best_d = d;
        }
    }
    return best;
}

DegradationProcess sample_process(World& world, int lineage) {
    const auto& fault = world.config.fault;
    DegradationProcess p;
    p.decrement = world.config.model.decrement;
    switch (fault.mode) {
        case FaultMode::None: break;
        case FaultMode::Afflicted:
            if (world.afflicted_lineage.at(static_cast<std::size_t>(lineage))) {
                if (fault.hardware == SignatureKind::Motor) {
                    p.q_left = p.q_right = fault.q_afflicted;
                } else {
                    p.q_sensor = fault.q_afflicted;
                }
            }
            break;
        case FaultMode::Random:
            p.q_left = world.rng.uniform(fault.q_min, fault.q_max);
            p.q_right = world.rng.uniform(fault.q_min, fault.q_max);
            p.q_sensor = world.rng.uniform(fault.q_min, fault.q_max);
            break;
    }
    return p;
}

namespace {

Robot fresh_robot(World& world, int lineage, Vec2 position) {
    Robot r;
    r.lineage = lineage;
    r.afflicted = world.afflicted_lineage.at(static_cast<std::size_t>(lineage));
    r.state.id = world.next_id++;
    r.state.pose = {position, std::numbers::pi / 2.0};
    r.state.power.level = world.config.model.p0;
    r.state.footprint_radius = world.config.model.footprint_radius;
    r.process = sample_process(world, lineage);
    r.spawn_time_s = world.time_s();
    return r;
}

}  // namespace

World make_world(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    World w;
    w.config = config;
    w.arena = build_arena(config.environment);
    w.ledger = ForagingLedger(static_cast<std::size_t>(config.n_robots));
    w.power = PowerConstants::from(config.model);
    w.rng = Rng(seed);

    const auto n = static_cast<std::size_t>(config.n_robots);
    w.afflicted_lineage.assign(n, false);
    if (config.fault.mode == FaultMode::Afflicted) {
        std::vector<int> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(w.rng.below(i))]);
        }
        for (int i = 0; i < config.afflicted_count(); ++i) {
            w.afflicted_lineage[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
        }
    }
    const auto positions = initial_positions(config.n_robots);
    for (std::size_t i = 0; i < n; ++i) {
        w.robots.push_back(fresh_robot(w, static_cast<int>(i), positions[i]));
    }
    return w;
}

bool spawn_robot(World& world, int lineage) {
    const auto where = free_base_position(world);
    if (!where) {
        world.pending_spawns.push_back(lineage);
        return false;
    }
    world.robots.push_back(fresh_robot(world, lineage, *where));
    ++world.replacements;
    return true;
}

void make_inert(World& world, std::size_t index) {
    Robot& r = world.robots.at(index);
    if (r.state.carrying) world.ledger.record_loss(r.lineage);
    world.obstacles.add(r.state.body());
    world.robots.erase(world.robots.begin() + static_cast<std::ptrdiff_t>(index));
}

void remove_robot(World& world, std::size_t index) {
    Robot& r = world.robots.at(index);
    if (r.state.carrying) world.ledger.record_loss(r.lineage);
    world.robots.erase(world.robots.begin() + static_cast<std::ptrdiff_t>(index));
}

}  // namespace swarmft
