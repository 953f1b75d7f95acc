#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "swarmft/repertoire_io.hpp"
#include "swarmft/simulation.hpp"
#include "swarmft/stats.hpp"

namespace swarmft {

RepertoireGenParams default_gen_params(SignatureKind kind) {
    RepertoireGenParams p;
    p.kind = kind;
    if (kind == SignatureKind::Motor) {
        p.target = 101;
        p.healthy_min = 0.8;
        p.self_quantile = 0.8;
        p.self_tolerance = 0.15;
    } else {
        p.target = 93;
        p.healthy_min = 0.7;
        p.self_quantile = 1.0;
        p.self_tolerance = 0.3;
    }
    return p;
}

std::vector<std::size_t> select_most_distinct(const std::vector<Series>& candidates, std::size_t target,
                                              const MatchParams& params, ResidualForm form) {
    std::vector<std::size_t> chosen;
    if (candidates.empty() || target == 0) return chosen;
    // closest[i]: highest similarity of candidate i to anything already chosen.
    std::vector<double> closest(candidates.size(), -std::numeric_limits<double>::infinity());
    std::vector<bool> taken(candidates.size(), false);
    std::size_t next = 0;
    while (chosen.size() < std::min(target, candidates.size())) {
        chosen.push_back(next);
        taken[next] = true;
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            closest[i] = std::max(closest[i], match_specificity(candidates[i], candidates[next], params, form));
            if (closest[i] < best) {
                best = closest[i];
                best_i = i;
            }
        }
        next = best_i;
    }
    return chosen;
}

namespace {

double relevant_d(const DegradationState& d, SignatureKind kind) {
    return kind == SignatureKind::Motor ? d.min_motor() : d.sensor;
}

// Keeps candidates that no earlier survivor matches at or above the threshold.
std::vector<Series> dedupe(std::vector<Series> pool, const MatchParams& params, double threshold, ResidualForm form) {
    std::vector<Series> kept;
    for (auto& s : pool) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Series& k) {
            return match_specificity(s, k, params, form) >= threshold;
        });
        if (!dup) kept.push_back(std::move(s));
    }
    return kept;
}

}  // namespace

LabelledRepertoire generate_labelled_repertoire(const RepertoireGenParams& p, const DetectorParams& detection) {
    const auto& stage = detection.stage(p.kind);
    std::vector<Series> faulty;
    std::vector<Series> self_set;

    for (int run = 0; run < p.training_runs; ++run) {
        ExperimentConfig cfg;
        cfg.environment = p.environment;
        cfg.algorithm = p.algorithm;
        cfg.n_robots = p.n_robots;
        cfg.duration_s = p.duration_s;
        cfg.fault.mode = FaultMode::Afflicted;
        cfg.fault.hardware = p.kind;
        cfg.fault.fraction = p.afflicted_fraction;
        cfg.fault.q_afflicted = p.fault_q;
        cfg.detection = detection;
        Simulation sim(cfg, derive_seed(p.seed, static_cast<std::uint64_t>(run)));
        sim.set_signature_observer([&](const Robot& r, const Signature& sig) {
            if (sig.kind != p.kind || !r.afflicted) return;
            const double d = relevant_d(r.state.degradation, p.kind);
            if (d >= p.band_lo && d <= p.band_hi) faulty.push_back(sig.samples);
        });
        sim.run();
    }
    // Self behaviour: every robot degrades slowly, so mild asymmetries count as normal.
    for (int run = 0; run < p.self_runs; ++run) {
        ExperimentConfig cfg;
        cfg.environment = p.environment;
        cfg.algorithm = p.algorithm;
        cfg.n_robots = p.n_robots;
        cfg.duration_s = p.duration_s;
        cfg.fault.mode = FaultMode::Random;
        cfg.detection = detection;
        Simulation sim(cfg, derive_seed(p.seed ^ 0x5e1fULL, static_cast<std::uint64_t>(run)));
        sim.set_signature_observer([&](const Robot& r, const Signature& sig) {
            if (sig.kind == p.kind && r.state.degradation.min_all() >= p.healthy_min) {
                self_set.push_back(sig.samples);
            }
        });
        sim.run();
    }

    if (faulty.empty()) {
        throw RepertoireError(fmt::format("gen-repertoire: training runs produced no faulty {} signatures",
                                          to_string(p.kind)));
    }
    // The self harvest keeps its duplicates: common behaviour must weigh more.
    faulty = dedupe(std::move(faulty), stage.insert, stage.dedupe_threshold, detection.form);

    std::vector<Series> candidates;
    std::vector<double> matches(self_set.size());
    for (auto& f : faulty) {
        for (std::size_t h = 0; h < self_set.size(); ++h) {
            matches[h] = match_specificity(f, self_set[h], stage.labelled, detection.form);
        }
        const bool self_like = !self_set.empty() && quantile(matches, p.self_quantile) > p.self_tolerance;
        if (!self_like) candidates.push_back(std::move(f));
    }
    if (candidates.size() < p.target) {
        throw RepertoireError(fmt::format("gen-repertoire: only {} distinct faulty {} signatures, {} requested",
                                          candidates.size(), to_string(p.kind), p.target));
    }

    LabelledRepertoire rep;
    rep.kind = p.kind;
    for (const auto i : select_most_distinct(candidates, p.target, stage.labelled, detection.form)) {
        rep.members.push_back(candidates[i]);
    }
    return rep;
}

}  // namespace swarmft
