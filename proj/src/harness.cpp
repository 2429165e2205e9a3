#include "hybridprecoding/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hybridprecoding/baseline.hpp"

namespace hp {

namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One design variant reported as a block of rows (one per SNR point).
struct Variant {
    std::string arch;
    std::string element;
    int l_max = 0;
    double power_w = 0.0;
    std::optional<Architecture> architecture;  // empty for the digital baseline
    double mu = 0.0;
    std::uint64_t stream = 0;  // design-rng stream id, shared by paired variants
};

struct TrialOutcome {
    // [variant][snr]
    std::vector<std::vector<double>> se;
    std::vector<double> residual;
    std::vector<double> leakage;
};

std::vector<Variant> variants_of(const ExperimentConfig& cfg) {
    std::vector<Variant> out;
    if (cfg.fully_digital) {
        Variant v;
        v.arch = "digital";
        v.element = "bd";
        v.power_w = fully_digital_power(cfg.system);
        out.push_back(v);
    }
    for (std::size_t a = 0; a < cfg.architectures.size(); ++a) {
        const Architecture& arch = cfg.architectures[a];
        Variant v;
        v.arch = connectivity_label(arch.connectivity);
        v.element = element_label(arch);
        v.l_max = arch.connectivity == Connectivity::FullyConnected ? 0 : arch.l_max;
        try {
            v.power_w = power_consumption(arch, cfg.system);
        } catch (const ConfigError&) {
            v.power_w = std::nan("");
        }
        v.architecture = arch;
        v.mu = cfg.admm.mu;
        v.stream = a + 1;
        out.push_back(v);
        if (cfg.admm_mu0) {
            v.arch += "-mu0";
            v.mu = 0.0;
            out.push_back(v);
        }
    }
    return out;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const std::vector<Variant>& variants, std::uint64_t seed) {
    const SystemConfig& sys = cfg.system;
    Rng channel_rng(seed);
    const ChannelRealization ch = sample(sys, cfg.channel, channel_rng);
    const DigitalPrecoder f_opt = bd_fully_digital_precoder(ch, sys);
    const AdmmProblem problem = make_problem(f_opt, ch, sys.n_streams);

    TrialOutcome out;
    for (const Variant& v : variants) {
        PerCarrier precoders;
        if (!v.architecture) {
            precoders = f_opt.f_opt;
        } else {
            AdmmParams prm = cfg.admm;
            prm.mu = v.mu;
            Rng design_rng(splitmix_finalize(seed ^ splitmix_finalize(v.stream)));
            precoders = design_hybrid(problem, *v.architecture, sys.n_rf_tx, prm, design_rng).precoder.effective();
        }
        const Combiner comb = fully_digital_combiner(ch, precoders, sys);
        std::vector<double> se;
        for (double snr : cfg.snr_grid_db)
            se.push_back(
                spectral_efficiency(ch, precoders, comb, EvalParams::from_snr_db(snr, sys.rho_u), sys.n_streams)
                    .mean_sum_se);
        const ResidualMetrics m = residual_metrics(f_opt.f_opt, precoders, ch, sys.n_streams);
        out.se.push_back(std::move(se));
        out.residual.push_back(m.approximation);
        out.leakage.push_back(m.mean_leakage);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t t) {
    return splitmix_finalize(master + t * 0x9e3779b97f4a7c15ULL);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    const std::size_t n = values.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(n - 1));
        s.ci95 = 1.96 * s.std / std::sqrt(static_cast<double>(n));
    }
    return s;
}

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
    validate(cfg);
    const std::vector<Variant> variants = variants_of(cfg);
    const int n = cfg.n_trials;

    std::vector<std::optional<TrialOutcome>> outcomes(n);
    std::vector<std::string> errors(n);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < n; t = next++) {
            try {
                outcomes[t] = run_trial(cfg, variants, trial_seed(cfg.master_seed, static_cast<std::uint64_t>(t)));
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    }

    SweepResult result;
    for (int t = 0; t < n; ++t)
        if (!outcomes[t]) {
            ++result.excluded_trials;
            result.failures.push_back("trial " + std::to_string(t) + ": " + errors[t]);
        }

    // Aggregation runs in trial order so the numbers never depend on scheduling.
    for (std::size_t v = 0; v < variants.size(); ++v) {
        std::vector<double> residual, leakage;
        for (int t = 0; t < n; ++t)
            if (outcomes[t]) {
                residual.push_back(outcomes[t]->residual[v]);
                leakage.push_back(outcomes[t]->leakage[v]);
            }
        const double mean_residual = summarize(residual).mean;
        const double mean_leakage = summarize(leakage).mean;
        for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
            std::vector<double> se;
            for (int t = 0; t < n; ++t)
                if (outcomes[t]) se.push_back(outcomes[t]->se[v][s]);
            const Summary sum = summarize(se);
            ResultRow row;
            row.arch = variants[v].arch;
            row.l_max = variants[v].l_max;
            row.element = variants[v].element;
            row.snr_db = cfg.snr_grid_db[s];
            row.trials = static_cast<int>(se.size());
            row.mean_se = sum.mean;
            row.std_se = sum.std;
            row.ci95 = sum.ci95;
            row.residual = mean_residual;
            row.leakage = mean_leakage;
            row.power_w = variants[v].power_w;
            result.rows.push_back(row);
            result.samples.push_back(std::move(se));
            result.leakage_samples.push_back(leakage);
        }
    }
    return result;
}

std::string make_manifest(const ExperimentConfig& cfg, const SweepResult& result, double wall_seconds, int threads) {
    nlohmann::ordered_json j;
    j["tool"] = "hpsim";
    j["version"] = kToolVersion;
    j["master_seed"] = cfg.master_seed;
    j["n_trials"] = cfg.n_trials;
    j["excluded_trials"] = result.excluded_trials;
    j["failures"] = result.failures;
    j["threads"] = threads;
    j["wall_time_s"] = wall_seconds;
    j["config_text"] = to_config_text(cfg);
    auto& c = j["config"];
    c["system"] = {{"n_tx", cfg.system.n_tx},           {"n_rx", cfg.system.n_rx},
                   {"n_users", cfg.system.n_users},     {"n_streams", cfg.system.n_streams},
                   {"n_rf_tx", cfg.system.n_rf_tx},     {"n_carriers", cfg.system.n_carriers},
                   {"f_c", cfg.system.f_c},             {"bandwidth", cfg.system.bandwidth},
                   {"rho_u", cfg.system.rho_u}};
    c["channel"] = {{"mode", cfg.channel.mode == ChannelMode::Clustered ? "clustered" : "uncorrelated"},
                    {"n_clusters", cfg.channel.n_clusters},
                    {"n_rays", cfg.channel.n_rays},
                    {"angular_spread_deg", cfg.channel.angular_spread_deg},
                    {"los_enabled", cfg.channel.los_enabled},
                    {"los_power_ratio", cfg.channel.los_power_ratio},
                    {"delay_spread", cfg.channel.delay_spread},
                    {"beam_split", cfg.channel.beam_split_enabled}};
    c["admm"] = {{"rho", cfg.admm.rho},
                 {"eta", cfg.admm.eta},
                 {"mu", cfg.admm.mu},
                 {"max_iters", cfg.admm.max_iters},
                 {"ridge", cfg.admm.ridge}};
    std::vector<std::string> labels;
    for (const auto& a : cfg.architectures) labels.push_back(architecture_label(a));
    c["architectures"] = labels;
    c["snr_grid_db"] = cfg.snr_grid_db;
    c["baselines"] = {{"fully_digital", cfg.fully_digital}, {"admm_mu0", cfg.admm_mu0}};
    return j.dump(2) + "\n";
}

std::string format_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream o;
    o << kCsvHeader << "\n";
    for (const auto& r : rows)
        o << r.arch << ',' << r.l_max << ',' << r.element << ',' << fmt(r.snr_db) << ',' << r.trials << ','
          << fmt(r.mean_se) << ',' << fmt(r.std_se) << ',' << fmt(r.ci95) << ',' << fmt(r.residual) << ','
          << fmt(r.leakage) << ',' << fmt(r.power_w) << "\n";
    return o.str();
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
    return std::filesystem::path(csv_path.string() + ".manifest.json");
}

void write_results(const std::vector<ResultRow>& rows, const std::string& manifest_json,
                   const std::filesystem::path& path) {
    if (rows.empty()) throw Error("write_results: refusing to write an empty result set");
    {
        std::ofstream csv(path, std::ios::binary);
        if (!csv) throw IoError("cannot open '" + path.string() + "' for writing");
        csv << format_csv(rows);
        if (!csv) throw IoError("failed writing '" + path.string() + "'");
    }
    const auto mpath = manifest_path(path);
    std::ofstream man(mpath, std::ios::binary);
    if (!man) throw IoError("cannot open '" + mpath.string() + "' for writing");
    man << manifest_json;
    if (!man) throw IoError("failed writing '" + mpath.string() + "'");
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("'" + path.string() + "': unexpected CSV header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 11) throw IoError("'" + path.string() + "': malformed row '" + line + "'");
        ResultRow r;
        r.arch = f[0];
        r.l_max = std::stoi(f[1]);
        r.element = f[2];
        r.snr_db = std::stod(f[3]);
        r.trials = std::stoi(f[4]);
        r.mean_se = std::stod(f[5]);
        r.std_se = std::stod(f[6]);
        r.ci95 = std::stod(f[7]);
        r.residual = std::stod(f[8]);
        r.leakage = std::stod(f[9]);
        r.power_w = std::stod(f[10]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace hp
