#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "swarmft/arena.hpp"
#include "swarmft/matching.hpp"

namespace swarmft {

enum class SignatureKind { Motor, Sensor };

std::string_view to_string(SignatureKind kind);
SignatureKind parse_signature_kind(std::string_view text);

inline constexpr std::size_t kSignatureLength = 30;
inline constexpr std::size_t kWindowLength = 300;

constexpr std::size_t dims_of(SignatureKind kind) { return kind == SignatureKind::Motor ? 3 : 1; }

struct Signature {
    SignatureKind kind = SignatureKind::Motor;
    Series samples{3};
    double population = 0.0;
};

/// Fixed-capacity ring of the most recent per-step samples.
class SlidingWindow {
public:
    explicit SlidingWindow(std::size_t dims, std::size_t capacity = kWindowLength);

    void push(std::span<const double> sample);
    void clear();

    std::size_t size() const { return count_; }
    std::size_t dims() const { return dims_; }
    std::size_t capacity() const { return capacity_; }

    /// Oldest-to-newest copy of the last `n` entries (all if n exceeds size).
    Series tail(std::size_t n) const;
    Series snapshot() const { return tail(count_); }

private:
    std::size_t dims_;
    std::size_t capacity_;
    std::vector<double> ring_;
    std::size_t head_ = 0;   // next write slot
    std::size_t count_ = 0;
};

struct Repertoire {
    SignatureKind kind = SignatureKind::Motor;
    std::vector<Signature> members;
};

/// A priori faulty signatures, shared read-only by every robot.
struct LabelledRepertoire {
    SignatureKind kind = SignatureKind::Motor;
    std::vector<Series> members;
};

struct PopulationParams {
    double k1 = 0.24;  // suppression by peer windows
    double k2 = 0.3;   // decay
    double k3 = 1.2;   // stimulation by the labelled repertoire
};

/// Matching and population constants for one stream.
struct StageParams {
    MatchParams insert{1.5, 1, 10};
    MatchParams window{4.0, 5, 0};
    MatchParams labelled{1.5, 1, 10};
    PopulationParams population{};
    double dedupe_threshold = 1.35;  // reject when m >= this
};

struct DetectorParams {
    StageParams motor;
    StageParams sensor;
    ResidualForm form = ResidualForm::Absolute;
    std::size_t capture_steps = 30;   // 5 s at 6 Hz
    std::size_t update_steps = 300;   // 50 s at 6 Hz

    /// Default matching and population constants.
    static DetectorParams defaults();

    const StageParams& stage(SignatureKind kind) const { return kind == SignatureKind::Motor ? motor : sensor; }
    StageParams& stage(SignatureKind kind) { return kind == SignatureKind::Motor ? motor : sensor; }
};

struct DetectionEvent {
    int robot_id = 0;
    int lineage = 0;
    SignatureKind kind = SignatureKind::Motor;
    double time_s = 0.0;
    double delta = 0.0;
};

struct GammaNode {
    Vec2 position;
    double sensor_range = 4.0;
};

/// Closest distance at which some neighbour localises `self` while `self`
/// cannot localise it back; r_max when every localisation is mutual.
double gamma_value(std::size_t self, std::span<const GammaNode> nodes, const ArenaSpec& arena,
                   const ObstacleSet& obstacles, double r_max = 4.0);

/// Adds `candidate` with x = 0 unless some member already matches at or above the threshold.
bool try_insert(Repertoire& repertoire, Signature candidate, const MatchParams& params, double threshold,
                ResidualForm form = ResidualForm::Absolute);

struct PopulationOutcome {
    bool detected = false;      // some member crossed x > 1
    std::size_t pruned = 0;
    double max_population = 0.0;
};

/// One unit Euler step of the population dynamics for every member of the
/// repertoire; members above 1 flag a fault, members below 0 are removed.
PopulationOutcome update_populations(Repertoire& repertoire, const Series& own_window,
                                     std::span<const Series* const> other_windows,
                                     const LabelledRepertoire* labelled, const StageParams& stage,
                                     ResidualForm form = ResidualForm::Absolute);

/// Derivative of a single population score; exposed for tests and diagnostics.
double population_rate(const Series& signature, const Series& own_window,
                       std::span<const Series* const> other_windows, const LabelledRepertoire* labelled,
                       const StageParams& stage, ResidualForm form = ResidualForm::Absolute);

/// Per-robot detector: behavioural windows and the two evolving repertoires.
class Detector {
public:
    Detector();

    void record(std::span<const double, 3> motor_sample, double gamma_normalised);
    void reset();

    const SlidingWindow& window(SignatureKind kind) const { return kind == SignatureKind::Motor ? motor_window_ : sensor_window_; }
    Repertoire& repertoire(SignatureKind kind) { return kind == SignatureKind::Motor ? motor_ : sensor_; }
    const Repertoire& repertoire(SignatureKind kind) const { return kind == SignatureKind::Motor ? motor_ : sensor_; }

    /// Most recent 30 samples, if that many have been recorded.
    std::optional<Signature> latest_signature(SignatureKind kind) const;

    bool armed(SignatureKind kind) const { return armed_[index(kind)]; }
    void disarm(SignatureKind kind) { armed_[index(kind)] = false; }

private:
    static std::size_t index(SignatureKind kind) { return kind == SignatureKind::Motor ? 0 : 1; }

    SlidingWindow motor_window_;
    SlidingWindow sensor_window_;
    Repertoire motor_;
    Repertoire sensor_;
    std::array<bool, 2> armed_{true, true};
};

struct DetectorSlot {
    Detector* detector = nullptr;
    bool enabled = true;        // false while a resolution is pending
    bool motor_active = true;   // LPF gating of the motor stream
};

struct KindDetection {
    std::size_t slot = 0;
    SignatureKind kind = SignatureKind::Motor;
};

/// Advances every detector after `completed_steps` simulation steps: captures
/// signatures on 5 s boundaries and updates populations on 50 s boundaries,
/// reading one snapshot of all windows. Returns newly raised (edge-triggered) detections.
std::vector<KindDetection> detection_tick(std::span<DetectorSlot> swarm, std::size_t completed_steps,
                                          const DetectorParams& params, const LabelledRepertoire* y_motor,
                                          const LabelledRepertoire* y_sensor);

/// Normalised motor sample (v / v_max, |omega| / omega_max, dP / dP_max), clamped to [0, 1].
std::array<double, 3> motor_sample(double linear_speed, double angular_speed, double power_draw, double v_max,
                                   double omega_max, double dp_max);

}  // namespace swarmft
