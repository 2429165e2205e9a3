#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridprecoding/admm.hpp"
#include "hybridprecoding/architecture.hpp"
#include "hybridprecoding/channel.hpp"
#include "hybridprecoding/evaluation.hpp"
#include "hybridprecoding/system.hpp"

namespace hp {

struct ExperimentConfig {
    SystemConfig system;
    ChannelParams channel;
    std::vector<Architecture> architectures;
    AdmmParams admm;
    std::vector<double> snr_grid_db;
    int n_trials = 1;
    std::uint64_t master_seed = 0;
    bool fully_digital = true;  // report the block-diagonalization baseline
    bool admm_mu0 = false;      // report every architecture again with mu = 0
    std::string output_path = "results.csv";
    int threads = 1;
};

/// Parses the dotted-key text format:
///
///     # comment
///     system.n_tx = 64
///     architectures = fc-ups, fc-qps3, daosa-ups:2
///     snr_grid_db = -10, 0, 10
///
/// Unknown keys, malformed values and missing required keys raise ConfigError
/// naming the key; the result is fully validated.
ExperimentConfig parse_config_text(std::string_view text, const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Throws ConfigError on the first violated invariant.
void validate(const ExperimentConfig& cfg);

/// Canonical text rendering; parse_config_text(to_config_text(c)) reproduces c.
std::string to_config_text(const ExperimentConfig& cfg);

struct ResultRow {
    std::string arch;     // connectivity label, "-mu0" suffix for the ablation, "digital" for BD
    int l_max = 0;        // 0 when not applicable
    std::string element;  // element label, "bd" for the digital baseline
    double snr_db = 0.0;
    int trials = 0;
    double mean_se = 0.0;
    double std_se = 0.0;
    double ci95 = 0.0;
    double residual = 0.0;
    double leakage = 0.0;
    double power_w = 0.0;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    int excluded_trials = 0;
    std::vector<std::string> failures;  // one diagnostic per excluded trial
    // Per-trial sum SE, [row][included trial], same order as rows.
    std::vector<std::vector<double>> samples;
    // Per-trial mean leakage, same layout as samples.
    std::vector<std::vector<double>> leakage_samples;
};

/// Seed of trial t: an avalanche bijection of master + t * golden-ratio constant,
/// hence distinct for all t < 2^64.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t);

/// Streaming-free aggregate of per-trial values taken in trial order.
struct Summary {
    double mean = 0.0;
    double std = 0.0;
    double ci95 = 0.0;
};
Summary summarize(std::span<const double> values);

/// Runs every trial (in parallel when threads > 1); output does not depend on threads.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 1);

inline const char* kCsvHeader = "arch,l_max,element,snr_db,trials,mean_se,std_se,ci95,residual,leakage,power_w";

/// JSON manifest: full config (canonical text and structured), master seed, tool
/// version, thread count, exclusions and wall time.
std::string make_manifest(const ExperimentConfig& cfg, const SweepResult& result, double wall_seconds, int threads);

/// Writes the CSV to `path` and the JSON manifest to `<path>.manifest.json`.
void write_results(const std::vector<ResultRow>& rows, const std::string& manifest_json,
                   const std::filesystem::path& path);

std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace hp
