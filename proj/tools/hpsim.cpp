// hpsim: Monte-Carlo simulator for constrained hybrid precoding.
//
//   hpsim run --config sweep.cfg [--seed N] [--trials N] [--out PATH] [--threads N]
//   hpsim validate --config sweep.cfg
//   hpsim power --arch fc-qps3 [--n-tx 256] [--n-rf 8]
//   hpsim power --table

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hybridprecoding/harness.hpp"

namespace {

void print_power(const hp::Architecture& arch, const hp::SystemConfig& sys) {
    const hp::DeviceCount d = hp::device_count(arch, sys);
    std::printf("%-14s %10.2f W  (phase shifters %ld @ %d bit, switches %ld)\n",
                hp::architecture_label(arch).c_str(), hp::power_consumption(arch, sys), d.phase_shifters,
                d.phase_shifter_bits, d.switches);
}

constexpr const char* kPowerTable[] = {
    "fc-ups",      "fc-dps",      "fc-qps2",     "fc-qps3",     "fc-switch",   "fc-si",       "daosa-ups:1",
    "daosa-ups:2", "daosa-ups:3", "daosa-ups:4", "daosa-dps:1", "daosa-dps:2", "daosa-dps:3", "daosa-dps:4",
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid precoding simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::optional<std::string> out;
    auto* run = app.add_subcommand("run", "Run a Monte-Carlo sweep and write CSV + manifest");
    run->add_option("--config", config_path, "Sweep configuration file")->required();
    run->add_option("--seed", seed, "Override master_seed");
    run->add_option("--trials", trials, "Override n_trials");
    run->add_option("--out", out, "Override output_path");
    run->add_option("--threads", threads, "Worker threads (results do not depend on it)");

    auto* check = app.add_subcommand("validate", "Parse and validate a configuration file");
    check->add_option("--config", config_path, "Configuration file")->required();

    std::string arch_spec;
    bool table = false;
    int n_tx = 256;
    int n_rf = 8;
    auto* power = app.add_subcommand("power", "Print the transmitter power of an architecture");
    auto* arch_opt = power->add_option("--arch", arch_spec, "Architecture label, e.g. fc-ups, daosa-dps:4");
    auto* table_opt = power->add_flag("--table", table, "Print the reference architecture table");
    arch_opt->excludes(table_opt);
    power->add_option("--n-tx", n_tx, "Transmit antennas")->capture_default_str();
    power->add_option("--n-rf", n_rf, "Transmit RF chains")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            hp::ExperimentConfig cfg = hp::parse_config(config_path);
            if (seed) cfg.master_seed = *seed;
            if (trials) cfg.n_trials = *trials;
            if (out) cfg.output_path = *out;
            if (threads) cfg.threads = *threads;
            hp::validate(cfg);

            const auto t0 = std::chrono::steady_clock::now();
            const hp::SweepResult result = hp::run_sweep(cfg, cfg.threads);
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (const auto& f : result.failures) std::cerr << "hpsim: excluded " << f << "\n";
            if (result.excluded_trials == cfg.n_trials) {
                std::cerr << "hpsim: every trial failed\n";
                return 1;
            }
            hp::write_results(result.rows, hp::make_manifest(cfg, result, wall, cfg.threads), cfg.output_path);
            std::cout << "wrote " << result.rows.size() << " rows to " << cfg.output_path << " ("
                      << cfg.n_trials - result.excluded_trials << "/" << cfg.n_trials << " trials, " << wall
                      << " s)\n";
        } else if (*check) {
            const hp::ExperimentConfig cfg = hp::parse_config(config_path);
            std::cout << "ok: " << cfg.architectures.size() << " architectures, " << cfg.snr_grid_db.size()
                      << " SNR points, " << cfg.n_trials << " trials\n";
        } else if (*power) {
            hp::SystemConfig sys;
            sys.n_tx = n_tx;
            sys.n_rf_tx = n_rf;
            if (table) {
                for (const char* label : kPowerTable) print_power(hp::parse_architecture(label), sys);
            } else {
                if (arch_spec.empty()) throw hp::ConfigError("power: pass --arch <spec> or --table");
                print_power(hp::parse_architecture(arch_spec), sys);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "hpsim: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
