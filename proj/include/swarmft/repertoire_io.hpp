#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "swarmft/arena.hpp"
#include "swarmft/behaviors.hpp"
#include "swarmft/detection.hpp"

namespace swarmft {

class RepertoireError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// JSON container: format tag, version, kind, dims, length, count and the raw samples.
std::string repertoire_to_json(const LabelledRepertoire& repertoire, std::uint64_t seed = 0);
LabelledRepertoire repertoire_from_json(const std::string& text);

void save_repertoire(const std::filesystem::path& path, const LabelledRepertoire& repertoire, std::uint64_t seed = 0);
LabelledRepertoire load_repertoire(const std::filesystem::path& path);

/// Process-wide read-only cache keyed by path; checks the stored kind.
const LabelledRepertoire& cached_repertoire(const std::filesystem::path& path, SignatureKind kind);

struct RepertoireGenParams {
    Algorithm algorithm = Algorithm::Gpf;
    Environment environment = Environment::Open;
    SignatureKind kind = SignatureKind::Motor;
    std::size_t target = 101;
    double band_lo = 0.2;   // relevant d range counted as faulty
    double band_hi = 0.6;
    double healthy_min = 0.8;  // self harvest: min d at or above this
    double fault_q = 0.33;
    double afflicted_fraction = 0.6;
    int n_robots = 10;
    int training_runs = 12;
    int self_runs = 12;  // random low-rate degradation, harvested while min d >= healthy_min
    double duration_s = 900.0;
    std::uint64_t seed = 0;
    /// A candidate is dropped when the `self_quantile` quantile of its labelled-stage
    /// matches against the self harvest exceeds `self_tolerance`.
    double self_tolerance = 0.15;
    double self_quantile = 0.8;
};

/// Parameters of the shipped repertoires (101 motor, 93 sensor members).
RepertoireGenParams default_gen_params(SignatureKind kind);

/// Harvests faulty signatures from training runs, dedupes them, drops any that
/// resemble common self behaviour, then keeps the `target` most mutually distinct.
/// Throws RepertoireError if too few survive.
LabelledRepertoire generate_labelled_repertoire(const RepertoireGenParams& params,
                                                const DetectorParams& detection = DetectorParams::defaults());

/// Greedy max-min selection under m; deterministic, starts from the first candidate.
std::vector<std::size_t> select_most_distinct(const std::vector<Series>& candidates, std::size_t target,
                                              const MatchParams& params, ResidualForm form);

}  // namespace swarmft
