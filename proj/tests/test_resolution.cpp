#include <gtest/gtest.h>

#include <vector>

#include "swarmft/resolution.hpp"
#include "swarmft/simulation.hpp"

using namespace swarmft;

namespace {

ExperimentConfig ideal_config(ResolutionPolicy policy, int n = 1) {
    ExperimentConfig c;
    c.n_robots = n;
    c.detector = DetectorKind::Ideal;
    c.resolution = policy;
    c.duration_s = 120.0;
    return c;
}

void place(Robot& r, Vec2 p, double heading = -1.5707963267948966) {
    r.state.pose = {p, heading};
}

void run_seconds(Simulation& sim, double seconds) {
    const int steps = static_cast<int>(seconds * 6.0 + 0.5);
    for (int i = 0; i < steps && !sim.finished(); ++i) sim.step();
}

std::vector<Robot> fleet(int n) {
    std::vector<Robot> robots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) robots[i].state.id = i;
    return robots;
}

ExperimentConfig random_fault_config(ResolutionPolicy policy, Environment env) {
    ExperimentConfig c;
    c.environment = env;
    c.n_robots = 10;
    c.fault.mode = FaultMode::Random;
    c.detector = DetectorKind::Ideal;
    c.d0 = 0.8;
    c.resolution = policy;
    c.duration_s = 600.0;
    return c;
}

}  // namespace

TEST(IdealDetector, MotorCrossing) {
    auto robots = fleet(2);
    robots[0].state.degradation.right = 0.69;
    const auto events = IdealDetector{0.7}.tick(robots, 12.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].robot_id, 0);
    EXPECT_EQ(events[0].kind, SignatureKind::Motor);
    EXPECT_DOUBLE_EQ(events[0].delta, 0.69);
    EXPECT_DOUBLE_EQ(events[0].time_s, 12.0);
    EXPECT_FALSE(robots[0].ideal_armed);
    EXPECT_TRUE(robots[1].ideal_armed);
}

TEST(IdealDetector, NoCrossingNoEvent) {
    auto robots = fleet(3);
    for (auto& r : robots) r.state.degradation = {0.7, 0.7, 0.7};
    for (int t = 0; t < 100; ++t) EXPECT_TRUE(IdealDetector{0.7}.tick(robots, t).empty());
}

TEST(IdealDetector, SensorFirstThenSilentUntilRearmed) {
    auto robots = fleet(1);
    robots[0].state.degradation.sensor = 0.69;
    auto events = IdealDetector{0.7}.tick(robots, 1.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, SignatureKind::Sensor);
    EXPECT_DOUBLE_EQ(events[0].delta, 0.69);

    robots[0].state.degradation.left = 0.5;
    EXPECT_TRUE(IdealDetector{0.7}.tick(robots, 2.0).empty());
    robots[0].ideal_armed = true;
    events = IdealDetector{0.7}.tick(robots, 3.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, SignatureKind::Motor);
    EXPECT_DOUBLE_EQ(events[0].delta, 0.5);
}

TEST(IdealDetector, MotorWinsTie) {
    auto robots = fleet(1);
    robots[0].state.degradation = {0.6, 1.0, 0.3};
    const auto events = IdealDetector{0.7}.tick(robots, 1.0);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, SignatureKind::Motor);
    EXPECT_DOUBLE_EQ(events[0].delta, 0.6);
}

TEST(Predictive, ReturnsAndIsServiced) {
    Simulation sim(ideal_config(ResolutionPolicy::Predictive), 1);
    auto& r = sim.world().robots.at(0);
    place(r, {5.0, 6.0});
    r.state.degradation.left = 0.65;
    run_seconds(sim, 1.0);
    ASSERT_EQ(sim.world().service_log.size(), 1u);
    EXPECT_EQ(sim.world().service_log[0].outcome, ServiceOutcome::Pending);
    EXPECT_EQ(sim.world().robots.at(0).state.mode, BehaviorMode::ReturnForService);
    EXPECT_DOUBLE_EQ(sim.world().service_log[0].delta, 0.65);

    run_seconds(sim, 90.0);
    const auto& w = sim.world();
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Serviced);
    ASSERT_EQ(w.robots.size(), 1u);
    EXPECT_FALSE(w.robots[0].resolving);
    EXPECT_TRUE(w.robots[0].ideal_armed);
    EXPECT_EQ(w.strandings, 0);
    EXPECT_TRUE(w.obstacles.empty());
}

TEST(Predictive, ServiceResetsState) {
    Simulation sim(ideal_config(ResolutionPolicy::Predictive), 1);
    auto& w = sim.world();
    auto& r = w.robots.at(0);
    r.state.degradation = {0.3, 0.9, 0.5};
    r.state.power.level = 0.4;
    r.detector.record(std::array<double, 3>{0.5, 0.5, 0.5}, 1.0);
    complete_service(w, 0);
    EXPECT_DOUBLE_EQ(r.state.degradation.left, 1.0);
    EXPECT_DOUBLE_EQ(r.state.degradation.right, 1.0);
    EXPECT_DOUBLE_EQ(r.state.degradation.sensor, 1.0);
    EXPECT_DOUBLE_EQ(r.state.power.level, w.config.model.p0);
    EXPECT_EQ(r.detector.window(SignatureKind::Motor).size(), 0u);
    EXPECT_EQ(r.state.mode, BehaviorMode::Explore);
}

TEST(Predictive, CarriedResourceCountsOnReturn) {
    Simulation sim(ideal_config(ResolutionPolicy::Predictive), 1);
    auto& w = sim.world();
    auto& r = w.robots.at(0);
    place(r, {5.0, 6.0});
    r.state.carrying = true;
    w.ledger.record_collect();
    r.state.degradation.sensor = 0.5;
    run_seconds(sim, 90.0);
    EXPECT_EQ(w.ledger.total_delivered(), 1);
    EXPECT_EQ(w.ledger.total_lost(), 0);
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Serviced);
}

TEST(Predictive, ImmobileRobotStrands) {
    Simulation sim(ideal_config(ResolutionPolicy::Predictive, 2), 1);
    auto& w = sim.world();
    place(w.robots.at(0), {5.0, 6.0});
    w.robots.at(0).state.degradation.left = 0.0;  // cap 0.0015 m/s
    w.robots.at(0).state.carrying = true;
    w.ledger.record_collect();
    const int stranded_id = w.robots.at(0).state.id;
    run_seconds(sim, 15.0);
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].robot_id, stranded_id);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Stranded);
    EXPECT_EQ(w.strandings, 1);
    EXPECT_EQ(w.obstacles.size(), 1u);
    EXPECT_EQ(w.robots.size(), 1u);
    EXPECT_EQ(w.ledger.total_lost(), 1);
    EXPECT_TRUE(w.pending_spawns.empty());
}

TEST(Predictive, AlreadyInBaseServicedImmediately) {
    Simulation sim(ideal_config(ResolutionPolicy::Predictive), 1);
    auto& w = sim.world();
    w.robots.at(0).state.degradation.right = 0.2;
    run_seconds(sim, 1.0);
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Serviced);
    EXPECT_DOUBLE_EQ(w.robots.at(0).state.degradation.right, 1.0);
}

TEST(Reactive, ShutdownOutsideBaseLeavesObstacleAndReplaces) {
    Simulation sim(ideal_config(ResolutionPolicy::Reactive, 3), 1);
    auto& w = sim.world();
    place(w.robots.at(1), {5.0, 5.5});
    w.robots.at(1).state.degradation.left = 0.5;
    w.robots.at(1).state.carrying = true;
    w.ledger.record_collect();
    const int lineage = w.robots.at(1).lineage;
    EXPECT_TRUE(resolve_detection(w, 1, make_event(w.robots.at(1), SignatureKind::Motor, 0.0)));
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Replaced);
    EXPECT_DOUBLE_EQ(w.service_log[0].delta, 0.5);
    ASSERT_EQ(w.obstacles.size(), 1u);
    EXPECT_EQ(w.obstacles.discs()[0].center, (Vec2{5.0, 5.5}));
    EXPECT_EQ(w.robots.size(), 3u);
    EXPECT_EQ(w.ledger.total_lost(), 1);
    EXPECT_EQ(w.replacements, 1);
    int same_lineage = 0;
    for (const auto& r : w.robots) {
        if (r.lineage == lineage) {
            ++same_lineage;
            EXPECT_TRUE(w.arena.base.contains(r.state.pose.position));
            EXPECT_DOUBLE_EQ(r.state.degradation.left, 1.0);
            EXPECT_FALSE(r.state.carrying);
        }
    }
    EXPECT_EQ(same_lineage, 1);
}

TEST(Reactive, ShutdownInsideBaseRemoves) {
    Simulation sim(ideal_config(ResolutionPolicy::Reactive, 2), 1);
    auto& w = sim.world();
    w.robots.at(0).state.degradation.sensor = 0.1;
    w.robots.at(0).state.carrying = true;
    w.ledger.record_collect();
    EXPECT_TRUE(resolve_detection(w, 0, make_event(w.robots.at(0), SignatureKind::Sensor, 0.0)));
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Removed);
    EXPECT_TRUE(w.obstacles.empty());
    EXPECT_EQ(w.robots.size(), 2u);
    EXPECT_EQ(w.ledger.total_lost(), 1);
    EXPECT_EQ(w.ledger.total_delivered(), 0);
}

TEST(Reactive, DetectedThroughSimulationClock) {
    Simulation sim(ideal_config(ResolutionPolicy::Reactive, 3), 1);
    auto& w = sim.world();
    place(w.robots.at(1), {5.0, 5.5});
    w.robots.at(1).state.degradation.left = 0.5;
    run_seconds(sim, 1.0);
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Replaced);
    ASSERT_EQ(w.obstacles.size(), 1u);
    // Up to one second of driving before the per-second check.
    EXPECT_LE(distance(w.obstacles.discs()[0].center, {5.0, 5.5}), 0.23);
    EXPECT_EQ(w.robots.size(), 3u);
}

TEST(NoResolution, EventLoggedUnresolved) {
    Simulation sim(ideal_config(ResolutionPolicy::None), 1);
    auto& w = sim.world();
    w.robots.at(0).state.degradation.left = 0.4;
    run_seconds(sim, 3.0);
    ASSERT_EQ(w.service_log.size(), 1u);
    EXPECT_EQ(w.service_log[0].outcome, ServiceOutcome::Unresolved);
    EXPECT_EQ(w.robots.size(), 1u);
}

TEST(ResolutionInvariants, ReactiveReplacementAccounting) {
    for (const auto env : {Environment::Open, Environment::Constrained}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto m = run_single(random_fault_config(ResolutionPolicy::Reactive, env), seed);
            int removed = 0;
            for (const auto& rec : m.service_log) {
                if (rec.outcome == ServiceOutcome::Removed) ++removed;
                EXPECT_TRUE(rec.outcome == ServiceOutcome::Removed || rec.outcome == ServiceOutcome::Replaced);
            }
            const int power_obstacles = m.power_depletions;
            EXPECT_EQ(m.obstacles_created - power_obstacles + removed, static_cast<int>(m.detections.size()));
            EXPECT_EQ(m.replacements, static_cast<int>(m.detections.size()));
            EXPECT_EQ(m.collected, m.carrying_at_end + [&] {
                int s = 0;
                for (std::size_t i = 0; i < m.delivered.size(); ++i) s += m.delivered[i] + m.lost[i];
                return s;
            }());
        }
    }
}

TEST(ResolutionInvariants, PredictiveSwarmShrinksOnlyByStranding) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        Simulation sim(random_fault_config(ResolutionPolicy::Predictive, Environment::Constrained), seed);
        while (!sim.finished()) {
            sim.step();
            const auto& w = sim.world();
            EXPECT_EQ(static_cast<int>(w.robots.size()), 10 - w.strandings - w.power_depletions);
        }
        const auto m = sim.metrics();
        int stranded = 0;
        for (const auto& rec : m.service_log) stranded += rec.outcome == ServiceOutcome::Stranded;
        EXPECT_EQ(stranded, m.strandings);
        EXPECT_EQ(m.replacements, 0);
    }
}

TEST(ResolutionInvariants, DeltaMatchesGroundTruthAtEvent) {
    const auto m = run_single(random_fault_config(ResolutionPolicy::Predictive, Environment::Open), 4);
    ASSERT_FALSE(m.detections.empty());
    for (const auto& e : m.detections) {
        // Checked every second, right after that second's degradation tick of at most 0.01.
        EXPECT_LT(e.delta, 0.8);
        EXPECT_GE(e.delta, 0.8 - 0.01 - 1e-9);
    }
    ASSERT_EQ(m.detections.size(), m.service_log.size());
    for (std::size_t i = 0; i < m.detections.size(); ++i) EXPECT_DOUBLE_EQ(m.detections[i].delta, m.service_log[i].delta);
}

TEST(ResolutionInvariants, UnitThresholdFiresOnFirstDegradation) {
    // With a strict comparison, d0 = 1 fires on the first second in which any coefficient has dropped.
    auto c = random_fault_config(ResolutionPolicy::Reactive, Environment::Open);
    c.d0 = 1.0;
    c.duration_s = 60.0;
    const auto m = run_single(c, 2);
    ASSERT_FALSE(m.detections.empty());
    for (const auto& e : m.detections) {
        EXPECT_LT(e.delta, 1.0);
        EXPECT_GE(e.delta, 0.99 - 1e-9);
    }
}
