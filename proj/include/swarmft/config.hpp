#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "swarmft/arena.hpp"
#include "swarmft/behaviors.hpp"
#include "swarmft/detection.hpp"
#include "swarmft/robot_model.hpp"

namespace swarmft {

/// Invalid configuration; the message starts with the offending field name.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class FaultMode { None, Afflicted, Random };
enum class DetectorKind { None, Ideal, Aapd };
enum class ResolutionPolicy { None, Predictive, Reactive };

std::string_view to_string(FaultMode mode);
std::string_view to_string(DetectorKind kind);
std::string_view to_string(ResolutionPolicy policy);
FaultMode parse_fault_mode(std::string_view text);
DetectorKind parse_detector(std::string_view text);
ResolutionPolicy parse_resolution(std::string_view text);

struct FaultSpec {
    FaultMode mode = FaultMode::None;
    SignatureKind hardware = SignatureKind::Motor;  // afflicted class
    double fraction = 0.0;                          // afflicted share of the swarm
    double q_afflicted = 0.33;
    double q_min = 0.01;  // random mode: per-coefficient q ~ U(q_min, q_max)
    double q_max = 0.15;
};

struct ExperimentConfig {
    Environment environment = Environment::Open;
    Algorithm algorithm = Algorithm::Gpf;
    int n_robots = 10;
    double duration_s = 900.0;
    int replicates = 10;
    FaultSpec fault;
    DetectorKind detector = DetectorKind::None;
    double d0 = 0.7;
    ResolutionPolicy resolution = ResolutionPolicy::None;
    std::string y_motor_path;   // empty: shipped repertoire for (algorithm, environment)
    std::string y_sensor_path;
    std::uint64_t master_seed = 0;
    ModelConstants model;
    DetectorParams detection = DetectorParams::defaults();
    bool record_telemetry = false;

    void validate() const;

    /// Number of afflicted robots, ceil(fraction * N).
    int afflicted_count() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

/// Applies one key; shared by the file parser and CLI overrides.
void apply_config_key(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& config);

/// Directory holding the shipped labelled repertoires.
std::filesystem::path default_data_dir();

std::filesystem::path labelled_repertoire_path(const ExperimentConfig& config, SignatureKind kind);

}  // namespace swarmft
