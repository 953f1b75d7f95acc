#include "swarmft/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace swarmft {

std::string_view to_string(SignatureKind kind) { return kind == SignatureKind::Motor ? "motor" : "sensor"; }

SignatureKind parse_signature_kind(std::string_view text) {
    if (text == "motor") return SignatureKind::Motor;
    if (text == "sensor") return SignatureKind::Sensor;
    throw std::invalid_argument("kind: expected motor|sensor, got '" + std::string(text) + "'");
}

DetectorParams DetectorParams::defaults() {
    DetectorParams p;
    p.motor.insert = {1.5, 1, 10};
    p.motor.window = {4.0, 5, 0};
    p.motor.labelled = {1.5, 1, 10};
    p.motor.population = {0.24, 0.3, 1.2};
    p.sensor.insert = {1.5, 1, 10};
    p.sensor.window = {5.0, 5, 0};
    p.sensor.labelled = {3.3, 1, 10};
    p.sensor.population = {0.18, 0.3, 1.2};
    p.motor.dedupe_threshold = 0.9 * p.motor.insert.s;
    p.sensor.dedupe_threshold = 0.9 * p.sensor.insert.s;
    return p;
}

SlidingWindow::SlidingWindow(std::size_t dims, std::size_t capacity)
    : dims_(dims), capacity_(capacity), ring_(dims * capacity, 0.0) {}

void SlidingWindow::push(std::span<const double> sample) {
    if (sample.size() != dims_) throw std::invalid_argument("SlidingWindow: sample has wrong dimensionality");
    std::copy(sample.begin(), sample.end(), ring_.begin() + static_cast<long>(head_ * dims_));
    head_ = (head_ + 1) % capacity_;
    count_ = std::min(count_ + 1, capacity_);
}

void SlidingWindow::clear() {
    head_ = 0;
    count_ = 0;
}

Series SlidingWindow::tail(std::size_t n) const {
    n = std::min(n, count_);
    Series out(dims_);
    const std::size_t start = (head_ + capacity_ - n) % capacity_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t slot = (start + i) % capacity_;
        out.push(std::span<const double>(ring_).subspan(slot * dims_, dims_));
    }
    return out;
}

double gamma_value(std::size_t self, std::span<const GammaNode> nodes, const ArenaSpec& arena,
                   const ObstacleSet& obstacles, double r_max) {
    const GammaNode& f = nodes[self];
    double gamma = r_max;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (j == self) continue;
        const double d = distance(f.position, nodes[j].position);
        // j localises f, f does not localise j.
        if (d > nodes[j].sensor_range || d <= f.sensor_range || d >= gamma) continue;
        if (!line_of_sight(f.position, nodes[j].position, arena, obstacles)) continue;
        gamma = d;
    }
    return gamma;
}

bool try_insert(Repertoire& repertoire, Signature candidate, const MatchParams& params, double threshold,
                ResidualForm form) {
    if (candidate.kind != repertoire.kind) throw std::invalid_argument("try_insert: signature kind mismatch");
    for (const auto& member : repertoire.members) {
        if (match_specificity(candidate.samples, member.samples, params, form) >= threshold) return false;
    }
    candidate.population = 0.0;
    repertoire.members.push_back(std::move(candidate));
    return true;
}

double population_rate(const Series& signature, const Series& own_window,
                       std::span<const Series* const> other_windows, const LabelledRepertoire* labelled,
                       const StageParams& stage, ResidualForm form) {
    const auto window_match = [&](const Series& w) {
        return w.empty() ? 0.0 : match_specificity(signature, w, stage.window, form);
    };
    double best_labelled = 0.0;
    if (labelled != nullptr) {
        for (const auto& y : labelled->members) {
            best_labelled = std::max(best_labelled, match_specificity(signature, y, stage.labelled, form));
        }
    }
    double suppression = 0.0;
    for (const Series* w : other_windows) suppression += window_match(*w);

    const auto& k = stage.population;
    return window_match(own_window) * (1.0 + k.k3 * best_labelled) - k.k1 * suppression - k.k2;
}

PopulationOutcome update_populations(Repertoire& repertoire, const Series& own_window,
                                     std::span<const Series* const> other_windows,
                                     const LabelledRepertoire* labelled, const StageParams& stage,
                                     ResidualForm form) {
    PopulationOutcome outcome;
    outcome.max_population = -std::numeric_limits<double>::infinity();
    for (auto& member : repertoire.members) {
        member.population += population_rate(member.samples, own_window, other_windows, labelled, stage, form);
        outcome.max_population = std::max(outcome.max_population, member.population);
        if (member.population > 1.0) outcome.detected = true;
    }
    const auto before = repertoire.members.size();
    std::erase_if(repertoire.members, [](const Signature& s) { return s.population < 0.0; });
    outcome.pruned = before - repertoire.members.size();
    if (repertoire.members.empty() && before == 0) outcome.max_population = 0.0;
    return outcome;
}

Detector::Detector()
    : motor_window_(3), sensor_window_(1), motor_{SignatureKind::Motor, {}}, sensor_{SignatureKind::Sensor, {}} {}

void Detector::record(std::span<const double, 3> motor_sample, double gamma_normalised) {
    motor_window_.push(motor_sample);
    const double g = std::clamp(gamma_normalised, 0.0, 1.0);
    sensor_window_.push(std::span<const double>(&g, 1));
}

void Detector::reset() {
    motor_window_.clear();
    sensor_window_.clear();
    motor_.members.clear();
    sensor_.members.clear();
    armed_ = {true, true};
}

std::optional<Signature> Detector::latest_signature(SignatureKind kind) const {
    const auto& w = window(kind);
    if (w.size() < kSignatureLength) return std::nullopt;
    return Signature{kind, w.tail(kSignatureLength), 0.0};
}

std::vector<KindDetection> detection_tick(std::span<DetectorSlot> swarm, std::size_t completed_steps,
                                          const DetectorParams& params, const LabelledRepertoire* y_motor,
                                          const LabelledRepertoire* y_sensor) {
    std::vector<KindDetection> raised;
    if (completed_steps == 0) return raised;
    constexpr std::array<SignatureKind, 2> kinds = {SignatureKind::Motor, SignatureKind::Sensor};
    const auto stream_on = [](const DetectorSlot& slot, SignatureKind kind) {
        return slot.enabled && (kind == SignatureKind::Sensor || slot.motor_active);
    };

    if (completed_steps % params.capture_steps == 0) {
        for (auto& slot : swarm) {
            for (const auto kind : kinds) {
                if (!stream_on(slot, kind)) continue;
                if (auto sig = slot.detector->latest_signature(kind)) {
                    const auto& stage = params.stage(kind);
                    try_insert(slot.detector->repertoire(kind), std::move(*sig), stage.insert,
                               stage.dedupe_threshold, params.form);
                }
            }
        }
    }

    if (completed_steps % params.update_steps != 0) return raised;

    for (const auto kind : kinds) {
        std::vector<Series> snapshots;
        snapshots.reserve(swarm.size());
        for (const auto& slot : swarm) snapshots.push_back(slot.detector->window(kind).snapshot());
        const LabelledRepertoire* labelled = kind == SignatureKind::Motor ? y_motor : y_sensor;

        std::vector<const Series*> others;
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            if (!stream_on(swarm[i], kind)) continue;
            others.clear();
            for (std::size_t j = 0; j < swarm.size(); ++j) {
                if (j != i && !snapshots[j].empty()) others.push_back(&snapshots[j]);
            }
            auto& rep = swarm[i].detector->repertoire(kind);
            const auto outcome = update_populations(rep, snapshots[i], others, labelled, params.stage(kind), params.form);
            if (outcome.detected && swarm[i].detector->armed(kind)) {
                swarm[i].detector->disarm(kind);
                raised.push_back({i, kind});
            }
        }
    }
    return raised;
}

std::array<double, 3> motor_sample(double linear_speed, double angular_speed, double power_draw, double v_max,
                                   double omega_max, double dp_max) {
    return {std::clamp(linear_speed / v_max, 0.0, 1.0), std::clamp(std::abs(angular_speed) / omega_max, 0.0, 1.0),
            std::clamp(power_draw / dp_max, 0.0, 1.0)};
}

}  // namespace swarmft
