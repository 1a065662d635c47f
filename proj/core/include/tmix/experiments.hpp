#pragma once

#include <map>

#include "tmix/norms.hpp"
#include "tmix/regloss.hpp"
#include "tmix/selfsimilar.hpp"

namespace tmix {

inline constexpr const char* kVersion = "0.1.0";

/// Static key-value config (one `key = value` per line, # comments) plus
/// flag overrides; unknown keys are rejected so typos never pass silently.
struct ExperimentConfig {
    std::string command = "mix";   // mix | regloss | norms | selftest
    std::string mixer = "snake";   // pinch | snake
    double s = 1.0;
    double p = 2.0;
    double lambda = 0.0;           // 0 = mixer default (1/3 snake, 1/2 pinch)
    int n_max = 4;
    int grid_n = 324;
    double dt = 1e-3;
    double kappa = 0.25;
    double delta = 1e-3;
    std::string sampling = "nearest";  // nearest | bicubic
    std::string output_dir = "out";
    std::string input;             // snapshot path for the norms command
    std::string golden_dir;        // selftest golden data (default: TMIX_GOLDEN_DIR)
    std::uint64_t seed = 12345;
    int checkpoints_per_patch = 4;

    void set(const std::string& key, const std::string& value);
    static ExperimentConfig from_file(const std::string& path);
    /// Canonical echo (sorted keys); hashed into every report.
    std::string canonical_text() const;
    std::uint64_t hash() const { return fnv1a(canonical_text()); }
    double effective_lambda() const;
    IntegratorConfig integrator() const;
};

struct RunReport {
    std::string command;
    std::string regime;
    double T_infinity = std::numeric_limits<double>::infinity();
    double M = 0.0;
    RateFit hm1_fit;
    RateFit geom_fit;
    int envelope_violations = 0;
    int level_cap = 0;
    int levels_run = 0;
    double wall_seconds = 0.0;
    int grid_n = 0;
    std::uint64_t config_hash = 0;
    std::string csv_path;
    std::string report_path;
    bool passed = false;
    std::string failure;  // first failing gate, empty when passed
};

/// Build the mixer selected by the config (lambda = 1/4 maps the pinch to
/// its squared block).
MixerConstruction build_mixer(const ExperimentConfig& cfg, const TorusGrid& grid);

RunReport run_mix(const ExperimentConfig& cfg);
RunReport run_regloss(const ExperimentConfig& cfg);
/// Reduced-size invariant suite; returns 0 on success, 2 on the first
/// failing gate (named with module, invariant, observed vs required).
int run_selftest(const ExperimentConfig& cfg, std::ostream& os);
int run_norms(const ExperimentConfig& cfg, std::ostream& os);

} // namespace tmix
