#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "swarmft/arena.hpp"
#include "swarmft/detection.hpp"
#include "swarmft/rng.hpp"

using namespace swarmft;

namespace {

Series constant(std::size_t length, std::size_t dims, double value) {
    return Series(std::vector<double>(length * dims, value), dims);
}

Series ramp(std::size_t length) {
    std::vector<double> v(length);
    for (std::size_t i = 0; i < length; ++i) v[i] = static_cast<double>(i) / 30.0;
    return Series(v, 1);
}

Signature motor_signature(double value) { return {SignatureKind::Motor, constant(30, 3, value), 0.0}; }

void feed(Detector& d, std::size_t steps, double motor_value, double gamma) {
    const std::array<double, 3> sample{motor_value, motor_value, motor_value};
    for (std::size_t i = 0; i < steps; ++i) d.record(sample, gamma);
}

}  // namespace

TEST(SlidingWindow, KeepsMostRecent) {
    SlidingWindow w(1, 4);
    for (int i = 0; i < 6; ++i) {
        const double v = i;
        w.push(std::span<const double>(&v, 1));
    }
    EXPECT_EQ(w.size(), 4u);
    const auto s = w.snapshot();
    ASSERT_EQ(s.length(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.at(i, 0), 2.0 + i);
    const auto t = w.tail(2);
    EXPECT_DOUBLE_EQ(t.at(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(t.at(1, 0), 5.0);
}

TEST(SlidingWindow, DefaultCapacityIsThreeHundred) {
    Detector d;
    feed(d, 400, 0.5, 1.0);
    EXPECT_EQ(d.window(SignatureKind::Motor).size(), 300u);
    EXPECT_EQ(d.window(SignatureKind::Sensor).size(), 300u);
}

TEST(TryInsert, EmptyRepertoireAccepts) {
    Repertoire x{SignatureKind::Motor, {}};
    EXPECT_TRUE(try_insert(x, motor_signature(0.5), {1.5, 1, 10}, 1.35));
    EXPECT_EQ(x.members.size(), 1u);
    EXPECT_DOUBLE_EQ(x.members[0].population, 0.0);
}

TEST(TryInsert, IdenticalRejected) {
    Repertoire x{SignatureKind::Sensor, {}};
    ASSERT_TRUE(try_insert(x, {SignatureKind::Sensor, constant(30, 1, 0.5), 0.0}, {1.5, 1, 10}, 1.35));
    EXPECT_FALSE(try_insert(x, {SignatureKind::Sensor, constant(30, 1, 0.5), 0.0}, {1.5, 1, 10}, 1.35));
    EXPECT_EQ(x.members.size(), 1u);
}

TEST(TryInsert, RampAgainstConstantAccepted) {
    Repertoire x{SignatureKind::Sensor, {}};
    ASSERT_TRUE(try_insert(x, {SignatureKind::Sensor, constant(30, 1, 0.5), 0.0}, {1.5, 1, 10}, 1.35));
    EXPECT_TRUE(try_insert(x, {SignatureKind::Sensor, ramp(30), 0.0}, {1.5, 1, 10}, 1.35));
    EXPECT_EQ(x.members.size(), 2u);
}

TEST(TryInsert, KindMismatchThrows) {
    Repertoire x{SignatureKind::Sensor, {}};
    EXPECT_THROW(try_insert(x, motor_signature(0.5), {1.5, 1, 10}, 1.35), std::invalid_argument);
}

TEST(PopulationRate, OwnWindowOnly) {
    const StageParams stage = DetectorParams::defaults().motor;
    const auto sig = constant(30, 3, 0.5);
    const auto own = constant(300, 3, 0.5);
    EXPECT_NEAR(match_specificity(sig, own, stage.window), 4.0, 1e-12);
    EXPECT_NEAR(population_rate(sig, own, {}, nullptr, stage), 3.7, 1e-12);
}

TEST(PopulationRate, MajoritySuppression) {
    const StageParams stage = DetectorParams::defaults().motor;
    const auto sig = constant(30, 3, 0.5);
    const auto own = constant(300, 3, 0.5);
    std::vector<Series> peers(9, own);
    std::vector<const Series*> others;
    for (const auto& p : peers) others.push_back(&p);
    EXPECT_NEAR(population_rate(sig, own, others, nullptr, stage), -4.94, 1e-12);

    Repertoire x{SignatureKind::Motor, {{SignatureKind::Motor, sig, 0.0}}};
    const auto outcome = update_populations(x, own, others, nullptr, stage);
    EXPECT_FALSE(outcome.detected);
    EXPECT_EQ(outcome.pruned, 1u);
    EXPECT_TRUE(x.members.empty());
}

TEST(PopulationRate, StimulationFactor) {
    StageParams stage = DetectorParams::defaults().motor;
    stage.window.s = 2.0;  // own-window match of 2 for an identical constant window
    const auto sig = constant(30, 3, 0.5);
    const auto own = constant(300, 3, 0.5);
    const LabelledRepertoire y{SignatureKind::Motor, {constant(30, 3, 0.5)}};
    EXPECT_NEAR(match_specificity(sig, y.members[0], stage.labelled), 1.5, 1e-12);
    EXPECT_NEAR(population_rate(sig, own, {}, &y, stage), 2.0 * 2.8 - 0.3, 1e-12);

    const auto peer = constant(300, 3, 0.5);
    const Series* others[] = {&peer};
    EXPECT_NEAR(population_rate(sig, own, others, &y, stage), 5.6 - 0.24 * 2.0 - 0.3, 1e-12);
}

TEST(PopulationDynamics, SuppressionProperty) {
    const auto params = DetectorParams::defaults();
    for (const auto kind : {SignatureKind::Motor, SignatureKind::Sensor}) {
        const auto& stage = params.stage(kind);
        const std::size_t dims = dims_of(kind);
        // Net rate m(1 - k1(N - 1)) - k2 is negative once k1(N - 1) > 1: N >= 6 for motor, N >= 7 for sensor.
        const std::size_t n_min = kind == SignatureKind::Motor ? 6 : 7;
        for (std::size_t n = n_min; n <= 20; ++n) {
            const auto window = constant(300, dims, 0.4);
            std::vector<const Series*> others(n - 1, &window);
            Repertoire x{kind, {{kind, constant(30, dims, 0.4), 0.0}}};
            for (int u = 0; u < 10; ++u) {
                const auto outcome = update_populations(x, window, others, nullptr, stage);
                EXPECT_FALSE(outcome.detected);
                for (const auto& m : x.members) EXPECT_LE(m.population, 1.0);
            }
        }
    }
}

TEST(PopulationDynamics, SensorSuppressionNeedsSevenRobots) {
    const auto stage = DetectorParams::defaults().sensor;
    const auto window = constant(300, 1, 0.4);
    std::vector<const Series*> others(5, &window);
    EXPECT_NEAR(population_rate(constant(30, 1, 0.4), window, others, nullptr, stage), 5.0 * (1.0 - 0.18 * 5) - 0.3,
                1e-12);
    EXPECT_GT(population_rate(constant(30, 1, 0.4), window, others, nullptr, stage), 0.0);
}

TEST(PopulationDynamics, StimulationProperty) {
    const auto stage = DetectorParams::defaults().motor;
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        // Own window is the signature level plus noise, so m varies across trials.
        const double level = rng.uniform(0.2, 0.8);
        const double noise = rng.uniform(0.0, 0.4);
        std::vector<double> w(300 * 3);
        for (auto& v : w) v = std::clamp(level + noise * (rng.uniform() - 0.5), 0.0, 1.0);
        const Series own(w, 3);
        const auto sig = constant(30, 3, level);
        const double m = match_specificity(sig, own, stage.window);
        if (m < stage.population.k2 + 0.05) continue;
        const int bound = static_cast<int>(std::ceil((1.0 + stage.population.k2) / (m - stage.population.k2)));
        Repertoire x{SignatureKind::Motor, {{SignatureKind::Motor, sig, 0.0}}};
        int updates = 0;
        bool detected = false;
        while (!detected && updates < 100) {
            detected = update_populations(x, own, {}, nullptr, stage).detected;
            ++updates;
        }
        EXPECT_TRUE(detected);
        EXPECT_LE(updates, bound);
    }
}

TEST(PopulationDynamics, NegativeMembersPruned) {
    const auto stage = DetectorParams::defaults().sensor;
    Repertoire x{SignatureKind::Sensor, {{SignatureKind::Sensor, ramp(30), 0.0}}};
    const auto own = constant(300, 1, 0.0);  // ramp barely matches an all-zero window
    const auto outcome = update_populations(x, own, {}, nullptr, stage);
    EXPECT_EQ(outcome.pruned, 1u);
    EXPECT_TRUE(x.members.empty());
}

TEST(Gamma, MutualLocalisation) {
    const auto arena = build_arena(Environment::Open);
    const ObstacleSet none;
    const std::vector<GammaNode> nodes = {{{5.0, 5.0}, 4.0}, {{6.0, 5.0}, 4.0}, {{5.0, 7.5}, 4.0}};
    for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_DOUBLE_EQ(gamma_value(i, nodes, arena, none), 4.0);
}

TEST(Gamma, DegradedSensor) {
    const auto arena = build_arena(Environment::Open);
    const ObstacleSet none;
    const std::vector<GammaNode> nodes = {{{5.0, 5.0}, 2.0}, {{8.0, 5.0}, 4.0}};
    EXPECT_DOUBLE_EQ(gamma_value(0, nodes, arena, none), 3.0);
    EXPECT_DOUBLE_EQ(gamma_value(1, nodes, arena, none), 4.0);
}

TEST(Gamma, Isolated) {
    const auto arena = build_arena(Environment::Open);
    const ObstacleSet none;
    const std::vector<GammaNode> nodes = {{{1.0, 1.0}, 2.0}, {{9.0, 9.0}, 4.0}};
    EXPECT_DOUBLE_EQ(gamma_value(0, nodes, arena, none), 4.0);
}

TEST(Gamma, WallHidesNeighbour) {
    const auto arena = build_arena(Environment::Constrained);
    const ObstacleSet none;
    const std::vector<GammaNode> nodes = {{{2.0, 4.0}, 1.0}, {{5.0, 4.0}, 4.0}};
    EXPECT_DOUBLE_EQ(gamma_value(0, nodes, arena, none), 4.0);
}

TEST(DetectionTick, CaptureAtFiveSeconds) {
    const auto params = DetectorParams::defaults();
    Detector d;
    std::vector<DetectorSlot> slots = {{&d, true, true}};
    feed(d, 29, 0.5, 1.0);
    EXPECT_TRUE(detection_tick(slots, 29, params, nullptr, nullptr).empty());
    EXPECT_TRUE(d.repertoire(SignatureKind::Motor).members.empty());
    feed(d, 1, 0.5, 1.0);
    detection_tick(slots, 30, params, nullptr, nullptr);
    EXPECT_EQ(d.repertoire(SignatureKind::Motor).members.size(), 1u);
    EXPECT_EQ(d.repertoire(SignatureKind::Sensor).members.size(), 1u);
}

TEST(DetectionTick, LpfMotorGating) {
    const auto params = DetectorParams::defaults();
    Detector d;
    std::vector<DetectorSlot> slots = {{&d, true, false}};
    feed(d, 30, 0.5, 1.0);
    detection_tick(slots, 30, params, nullptr, nullptr);
    EXPECT_TRUE(d.repertoire(SignatureKind::Motor).members.empty());
    EXPECT_EQ(d.repertoire(SignatureKind::Sensor).members.size(), 1u);
}

TEST(DetectionTick, UpdateAtFiftySecondsDetectsLoneAnomaly) {
    // A lone robot has no suppression: its own signature grows by 3.7 at the first update.
    const auto params = DetectorParams::defaults();
    Detector d;
    std::vector<DetectorSlot> slots = {{&d, true, true}};
    std::vector<KindDetection> raised;
    for (std::size_t step = 1; step <= 300; ++step) {
        feed(d, 1, 0.5, 1.0);
        const auto r = detection_tick(slots, step, params, nullptr, nullptr);
        if (step < 300) EXPECT_TRUE(r.empty());
        raised.insert(raised.end(), r.begin(), r.end());
    }
    ASSERT_EQ(raised.size(), 2u);
    EXPECT_EQ(raised[0].kind, SignatureKind::Motor);
    EXPECT_EQ(raised[1].kind, SignatureKind::Sensor);
    EXPECT_FALSE(d.armed(SignatureKind::Motor));
    EXPECT_NEAR(d.repertoire(SignatureKind::Motor).members[0].population, 3.7, 1e-12);
}

TEST(DetectionTick, EdgeTriggeredUntilReset) {
    const auto params = DetectorParams::defaults();
    Detector d;
    std::vector<DetectorSlot> slots = {{&d, true, true}};
    std::size_t count = 0;
    for (std::size_t step = 1; step <= 900; ++step) {
        feed(d, 1, 0.5, 1.0);
        count += detection_tick(slots, step, params, nullptr, nullptr).size();
    }
    EXPECT_EQ(count, 2u);
    d.reset();
    EXPECT_TRUE(d.armed(SignatureKind::Motor));
    EXPECT_EQ(d.window(SignatureKind::Motor).size(), 0u);
}

TEST(DetectionTick, HomogeneousSwarmStaysQuiet) {
    const auto params = DetectorParams::defaults();
    std::vector<Detector> detectors(10);
    std::vector<DetectorSlot> slots;
    for (auto& d : detectors) slots.push_back({&d, true, true});
    std::size_t count = 0;
    for (std::size_t step = 1; step <= 1800; ++step) {
        for (auto& d : detectors) feed(d, 1, 0.5, 1.0);
        count += detection_tick(slots, step, params, nullptr, nullptr).size();
    }
    EXPECT_EQ(count, 0u);
}

TEST(MotorSample, NormalisedAndClamped) {
    const auto s = motor_sample(0.11, -1.42, 0.5, 0.22, 2.84, 1.0);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], 0.5);
    EXPECT_DOUBLE_EQ(s[2], 0.5);
    const auto c = motor_sample(0.3, 5.0, 2.0, 0.22, 2.84, 1.0);
    EXPECT_DOUBLE_EQ(c[0], 1.0);
    EXPECT_DOUBLE_EQ(c[1], 1.0);
    EXPECT_DOUBLE_EQ(c[2], 1.0);
}

TEST(DetectorParams, Defaults) {
    const auto p = DetectorParams::defaults();
    EXPECT_DOUBLE_EQ(p.motor.population.k1, 0.24);
    EXPECT_DOUBLE_EQ(p.sensor.population.k1, 0.18);
    EXPECT_DOUBLE_EQ(p.motor.population.k3, 1.2);
    EXPECT_DOUBLE_EQ(p.motor.dedupe_threshold, 1.35);
    EXPECT_EQ(p.capture_steps, 30u);
    EXPECT_EQ(p.update_steps, 300u);
}
