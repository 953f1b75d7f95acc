#include "swarmft/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#ifndef SWARMFT_DATA_DIR
#define SWARMFT_DATA_DIR "data"
#endif

namespace swarmft {

std::string_view to_string(FaultMode mode) {
    switch (mode) {
        case FaultMode::None: return "none";
        case FaultMode::Afflicted: return "afflicted";
        case FaultMode::Random: return "random";
    }
    return "none";
}

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::None: return "none";
        case DetectorKind::Ideal: return "ideal";
        case DetectorKind::Aapd: return "aapd";
    }
    return "none";
}

std::string_view to_string(ResolutionPolicy policy) {
    switch (policy) {
        case ResolutionPolicy::None: return "none";
        case ResolutionPolicy::Predictive: return "predictive";
        case ResolutionPolicy::Reactive: return "reactive";
    }
    return "none";
}

FaultMode parse_fault_mode(std::string_view text) {
    if (text == "none") return FaultMode::None;
    if (text == "afflicted") return FaultMode::Afflicted;
    if (text == "random") return FaultMode::Random;
    throw ConfigError(fmt::format("fault_mode: expected none|afflicted|random, got '{}'", text));
}

DetectorKind parse_detector(std::string_view text) {
    if (text == "none") return DetectorKind::None;
    if (text == "ideal") return DetectorKind::Ideal;
    if (text == "aapd") return DetectorKind::Aapd;
    throw ConfigError(fmt::format("detector: expected none|ideal|aapd, got '{}'", text));
}

ResolutionPolicy parse_resolution(std::string_view text) {
    if (text == "none") return ResolutionPolicy::None;
    if (text == "predictive") return ResolutionPolicy::Predictive;
    if (text == "reactive") return ResolutionPolicy::Reactive;
    throw ConfigError(fmt::format("resolution: expected none|predictive|reactive, got '{}'", text));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view value) {
    const std::string v(value);
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value));
    }
    return out;
}

long long to_int(std::string_view key, std::string_view value) {
    const std::string v(value);
    char* end = nullptr;
    const long long out = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, value));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(fmt::format("{}: expected true|false, got '{}'", key, value));
}

template <typename Fn>
auto rethrow_as_config(std::string_view key, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", key, e.what()));
    }
}

// `{motor|sensor}_{insert|window|labelled}_{s|g|k}`, `{motor|sensor}_{k1|k2|k3}`,
// `{motor|sensor}_dedupe_threshold`.
bool apply_stage_key(DetectorParams& det, std::string_view key, std::string_view value) {
    StageParams* stage = nullptr;
    std::string_view rest;
    if (key.starts_with("motor_")) {
        stage = &det.motor;
        rest = key.substr(6);
    } else if (key.starts_with("sensor_")) {
        stage = &det.sensor;
        rest = key.substr(7);
    } else {
        return false;
    }
    if (rest == "k1") return stage->population.k1 = to_double(key, value), true;
    if (rest == "k2") return stage->population.k2 = to_double(key, value), true;
    if (rest == "k3") return stage->population.k3 = to_double(key, value), true;
    if (rest == "dedupe_threshold") return stage->dedupe_threshold = to_double(key, value), true;
    MatchParams* match = nullptr;
    if (rest.starts_with("insert_")) match = &stage->insert, rest = rest.substr(7);
    else if (rest.starts_with("window_")) match = &stage->window, rest = rest.substr(7);
    else if (rest.starts_with("labelled_")) match = &stage->labelled, rest = rest.substr(9);
    if (match == nullptr) return false;
    if (rest == "s") return match->s = to_double(key, value), true;
    if (rest == "g") return match->g = static_cast<int>(to_int(key, value)), true;
    if (rest == "k") return match->k = static_cast<int>(to_int(key, value)), true;
    return false;
}

}  // namespace

void apply_config_key(ExperimentConfig& c, std::string_view key, std::string_view value) {
    if (key == "environment") c.environment = rethrow_as_config(key, [&] { return parse_environment(value); });
    else if (key == "algorithm") c.algorithm = rethrow_as_config(key, [&] { return parse_algorithm(value); });
    else if (key == "n_robots") c.n_robots = static_cast<int>(to_int(key, value));
    else if (key == "duration_s") c.duration_s = to_double(key, value);
    else if (key == "replicates") c.replicates = static_cast<int>(to_int(key, value));
    else if (key == "fault_mode") c.fault.mode = parse_fault_mode(value);
    else if (key == "fault_class") c.fault.hardware = rethrow_as_config(key, [&] { return parse_signature_kind(value); });
    else if (key == "fault_fraction") c.fault.fraction = to_double(key, value);
    else if (key == "fault_q") c.fault.q_afflicted = to_double(key, value);
    else if (key == "q_min") c.fault.q_min = to_double(key, value);
    else if (key == "q_max") c.fault.q_max = to_double(key, value);
    else if (key == "detector") c.detector = parse_detector(value);
    else if (key == "d0") c.d0 = to_double(key, value);
    else if (key == "resolution") c.resolution = parse_resolution(value);
    else if (key == "y_motor_path") c.y_motor_path = std::string(value);
    else if (key == "y_sensor_path") c.y_sensor_path = std::string(value);
    else if (key == "master_seed" || key == "seed") c.master_seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "v_max") c.model.v_max = to_double(key, value);
    else if (key == "r_max") c.model.r_max = to_double(key, value);
    else if (key == "decrement") c.model.decrement = to_double(key, value);
    else if (key == "dt") c.model.dt = to_double(key, value);
    else if (key == "record_telemetry") c.record_telemetry = to_bool(key, value);
    else if (key == "residual_form") {
        if (value == "absolute") c.detection.form = ResidualForm::Absolute;
        else if (value == "signed") c.detection.form = ResidualForm::Signed;
        else throw ConfigError(fmt::format("residual_form: expected absolute|signed, got '{}'", value));
    } else if (!apply_stage_key(c.detection, key, value)) {
        throw ConfigError(fmt::format("{}: unknown configuration key", key));
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
        }
        apply_config_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path.string()));
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::move(base));
}

void ExperimentConfig::validate() const {
    if (n_robots < 1 || n_robots > 30) throw ConfigError(fmt::format("n_robots: must be in [1, 30], got {}", n_robots));
    if (!(duration_s > 0.0)) throw ConfigError("duration_s: must be positive");
    if (replicates < 1) throw ConfigError("replicates: must be at least 1");
    if (fault.fraction < 0.0 || fault.fraction > 1.0) throw ConfigError("fault_fraction: must be in [0, 1]");
    if (fault.q_afflicted < 0.0 || fault.q_afflicted > 1.0) throw ConfigError("fault_q: must be in [0, 1]");
    if (fault.q_min < 0.0 || fault.q_max > 1.0 || fault.q_min > fault.q_max) {
        throw ConfigError("q_min: need 0 <= q_min <= q_max <= 1");
    }
    if (detector == DetectorKind::Ideal && !(d0 > 0.0 && d0 <= 1.0)) throw ConfigError("d0: must be in (0, 1]");
    if (detector == DetectorKind::None && resolution != ResolutionPolicy::None) {
        throw ConfigError("resolution: requires a detector (ideal or aapd)");
    }
    if (!(model.dt > 0.0)) throw ConfigError("dt: must be positive");
    const double sps = 1.0 / model.dt;
    if (std::abs(sps - std::round(sps)) > 1e-9) throw ConfigError("dt: must divide one second evenly");
    if (!(model.v_max > 0.0)) throw ConfigError("v_max: must be positive");
    if (!(model.r_max > 0.0)) throw ConfigError("r_max: must be positive");
    if (model.decrement < 0.0 || model.decrement > 1.0) throw ConfigError("decrement: must be in [0, 1]");
    for (const auto* stage : {&detection.motor, &detection.sensor}) {
        for (const auto* m : {&stage->insert, &stage->window, &stage->labelled}) {
            if (m->g <= 0 || m->k < 0) throw ConfigError("detection: stride g must be > 0 and k >= 0");
        }
    }
}

int ExperimentConfig::afflicted_count() const {
    if (fault.mode != FaultMode::Afflicted) return 0;
    return static_cast<int>(std::ceil(fault.fraction * n_robots - 1e-9));
}

std::string to_config_text(const ExperimentConfig& c) {
    std::string out;
    const auto put = [&](std::string_view k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
    put("environment", to_string(c.environment));
    put("algorithm", to_string(c.algorithm));
    put("n_robots", c.n_robots);
    put("duration_s", c.duration_s);
    put("replicates", c.replicates);
    put("fault_mode", to_string(c.fault.mode));
    put("fault_class", to_string(c.fault.hardware));
    put("fault_fraction", c.fault.fraction);
    put("fault_q", c.fault.q_afflicted);
    put("q_min", c.fault.q_min);
    put("q_max", c.fault.q_max);
    put("detector", to_string(c.detector));
    put("d0", c.d0);
    put("resolution", to_string(c.resolution));
    if (!c.y_motor_path.empty()) put("y_motor_path", c.y_motor_path);
    if (!c.y_sensor_path.empty()) put("y_sensor_path", c.y_sensor_path);
    put("master_seed", c.master_seed);
    put("v_max", c.model.v_max);
    put("r_max", c.model.r_max);
    put("decrement", c.model.decrement);
    put("dt", c.model.dt);
    put("record_telemetry", c.record_telemetry ? "true" : "false");
    put("residual_form", c.detection.form == ResidualForm::Absolute ? "absolute" : "signed");
    for (const auto kind : {SignatureKind::Motor, SignatureKind::Sensor}) {
        const auto& st = c.detection.stage(kind);
        const auto name = to_string(kind);
        const auto match = [&](std::string_view stage_name, const MatchParams& m) {
            put(fmt::format("{}_{}_s", name, stage_name), m.s);
            put(fmt::format("{}_{}_g", name, stage_name), m.g);
            put(fmt::format("{}_{}_k", name, stage_name), m.k);
        };
        match("insert", st.insert);
        match("window", st.window);
        match("labelled", st.labelled);
        put(fmt::format("{}_k1", name), st.population.k1);
        put(fmt::format("{}_k2", name), st.population.k2);
        put(fmt::format("{}_k3", name), st.population.k3);
        put(fmt::format("{}_dedupe_threshold", name), st.dedupe_threshold);
    }
    return out;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("SWARMFT_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return SWARMFT_DATA_DIR;
}

std::filesystem::path labelled_repertoire_path(const ExperimentConfig& c, SignatureKind kind) {
    const std::string& explicit_path = kind == SignatureKind::Motor ? c.y_motor_path : c.y_sensor_path;
    if (!explicit_path.empty()) return explicit_path;
    return default_data_dir() / "repertoires" /
           fmt::format("{}_{}_{}.json", to_string(c.algorithm), to_string(c.environment), to_string(kind));
}

}  // namespace swarmft
