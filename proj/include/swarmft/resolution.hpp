#pragma once

#include <cstddef>
#include <vector>

#include "swarmft/detection.hpp"
#include "swarmft/world.hpp"

namespace swarmft {

/// Oracle detector on ground-truth degradation.
struct IdealDetector {
    double d0 = 0.7;

    /// Fires once per armed robot whose min(d_l, d_r, d_S) < d0, then disarms it.
    /// The motor class wins a same-second tie.
    std::vector<DetectionEvent> tick(std::vector<Robot>& robots, double time_s) const;
};

/// Wheel speed cap below which a robot counts as permanently immobile.
inline constexpr double kImmobileCap = 0.005;
inline constexpr int kStrandSeconds = 10;

/// Event for robot `index` with delta taken from its current degradation.
DetectionEvent make_event(const Robot& robot, SignatureKind kind, double time_s);

/// Logs the event and applies the run's policy. Returns true if robot `index`
/// left the live list (its slot now holds a different robot or is gone).
bool resolve_detection(World& world, std::size_t index, const DetectionEvent& event);

/// Predictive: the robot heads home for service. Never removes it.
void apply_predictive(World& world, std::size_t index, std::size_t log_entry);

/// Reactive: shut down in place (obstacle) or removed if inside the base; a
/// replacement of the same lineage spawns at the base.
void apply_reactive(World& world, std::size_t index, std::size_t log_entry);

/// Instant service at the base: fresh degradation, power and detector.
void complete_service(World& world, std::size_t index);

/// Returning robot failed en route: obstacle, no replacement.
void strand(World& world, std::size_t index);

/// Per-second immobility bookkeeping for returning robots. Returns true if stranded.
bool check_stranding(World& world, std::size_t index);

/// Retries queued replacement spawns.
void flush_pending_spawns(World& world);

}  // namespace swarmft
