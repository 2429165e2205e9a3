#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hybridprecoding/harness.hpp"

namespace hp {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        auto item = trim(s.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        s = s.substr(comma + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end || v.empty())
        throw ConfigError("config key '" + std::string(key) + "': invalid value '" + std::string(v) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    return std::string(buf, end);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        auto int_field = [](int SystemConfig::*m) {
            return Setter([m](ExperimentConfig& c, auto k, auto v) { c.system.*m = parse_number<int>(k, v); });
        };
        auto dbl_field = [](double SystemConfig::*m) {
            return Setter([m](ExperimentConfig& c, auto k, auto v) { c.system.*m = parse_number<double>(k, v); });
        };
        t["system.n_tx"] = int_field(&SystemConfig::n_tx);
        t["system.n_rx"] = int_field(&SystemConfig::n_rx);
        t["system.n_users"] = int_field(&SystemConfig::n_users);
        t["system.n_streams"] = int_field(&SystemConfig::n_streams);
        t["system.n_rf_tx"] = int_field(&SystemConfig::n_rf_tx);
        t["system.n_carriers"] = int_field(&SystemConfig::n_carriers);
        t["system.f_c"] = dbl_field(&SystemConfig::f_c);
        t["system.bandwidth"] = dbl_field(&SystemConfig::bandwidth);
        t["system.rho_u"] = dbl_field(&SystemConfig::rho_u);

        t["channel.mode"] = [](ExperimentConfig& c, auto k, auto v) {
            if (v == "clustered")
                c.channel.mode = ChannelMode::Clustered;
            else if (v == "uncorrelated")
                c.channel.mode = ChannelMode::Uncorrelated;
            else
                throw ConfigError("config key '" + std::string(k) + "': expected clustered or uncorrelated");
        };
        t["channel.n_clusters"] = [](ExperimentConfig& c, auto k, auto v) {
            c.channel.n_clusters = parse_number<int>(k, v);
        };
        t["channel.n_rays"] = [](ExperimentConfig& c, auto k, auto v) { c.channel.n_rays = parse_number<int>(k, v); };
        t["channel.angular_spread_deg"] = [](ExperimentConfig& c, auto k, auto v) {
            c.channel.angular_spread_deg = parse_number<double>(k, v);
        };
        t["channel.los_enabled"] = [](ExperimentConfig& c, auto k, auto v) { c.channel.los_enabled = parse_bool(k, v); };
        t["channel.los_power_ratio"] = [](ExperimentConfig& c, auto k, auto v) {
            c.channel.los_power_ratio = parse_number<double>(k, v);
        };
        t["channel.delay_spread"] = [](ExperimentConfig& c, auto k, auto v) {
            c.channel.delay_spread = parse_number<double>(k, v);
        };
        t["channel.beam_split"] = [](ExperimentConfig& c, auto k, auto v) {
            c.channel.beam_split_enabled = parse_bool(k, v);
        };

        t["admm.rho"] = [](ExperimentConfig& c, auto k, auto v) { c.admm.rho = parse_number<double>(k, v); };
        t["admm.eta"] = [](ExperimentConfig& c, auto k, auto v) { c.admm.eta = parse_number<double>(k, v); };
        t["admm.mu"] = [](ExperimentConfig& c, auto k, auto v) { c.admm.mu = parse_number<double>(k, v); };
        t["admm.max_iters"] = [](ExperimentConfig& c, auto k, auto v) { c.admm.max_iters = parse_number<int>(k, v); };
        t["admm.ridge"] = [](ExperimentConfig& c, auto k, auto v) { c.admm.ridge = parse_number<double>(k, v); };

        t["architectures"] = [](ExperimentConfig& c, auto k, auto v) {
            c.architectures.clear();
            for (auto item : split_list(v)) {
                try {
                    c.architectures.push_back(parse_architecture(item));
                } catch (const ConfigError& e) {
                    throw ConfigError("config key '" + std::string(k) + "': " + e.what());
                }
            }
        };
        t["snr_grid_db"] = [](ExperimentConfig& c, auto k, auto v) {
            c.snr_grid_db.clear();
            for (auto item : split_list(v)) c.snr_grid_db.push_back(parse_number<double>(k, item));
        };
        t["n_trials"] = [](ExperimentConfig& c, auto k, auto v) { c.n_trials = parse_number<int>(k, v); };
        t["master_seed"] = [](ExperimentConfig& c, auto k, auto v) {
            c.master_seed = parse_number<std::uint64_t>(k, v);
        };
        t["baselines.fully_digital"] = [](ExperimentConfig& c, auto k, auto v) { c.fully_digital = parse_bool(k, v); };
        t["baselines.admm_mu0"] = [](ExperimentConfig& c, auto k, auto v) { c.admm_mu0 = parse_bool(k, v); };
        t["output_path"] = [](ExperimentConfig& c, auto, auto v) { c.output_path = std::string(v); };
        t["threads"] = [](ExperimentConfig& c, auto k, auto v) { c.threads = parse_number<int>(k, v); };
        return t;
    }();
    return table;
}

constexpr const char* kRequired[] = {"system.n_tx",   "system.n_rx", "system.n_users", "system.n_streams",
                                     "system.n_rf_tx", "architectures", "snr_grid_db", "n_trials",
                                     "master_seed"};

}  // namespace

ExperimentConfig parse_config_text(std::string_view text, const std::string& origin) {
    ExperimentConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown config key '" + std::string(key) +
                              "'");
        if (!seen.insert(std::string(key)).second)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate config key '" +
                              std::string(key) + "'");
        it->second(cfg, key, value);
    }
    for (const char* key : kRequired)
        if (!seen.contains(key)) throw ConfigError(origin + ": missing required config key '" + key + "'");
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.system);
    validate(cfg.channel);
    validate(cfg.admm);
    if (cfg.architectures.empty()) throw ConfigError("architectures: at least one architecture is required");
    for (const auto& a : cfg.architectures) {
        try {
            validate(a, cfg.system.n_tx, cfg.system.n_rf_tx);
        } catch (const ConfigError& e) {
            throw ConfigError("architectures (" + architecture_label(a) + "): " + e.what());
        }
    }
    if (cfg.snr_grid_db.empty()) throw ConfigError("snr_grid_db must not be empty");
    if (cfg.n_trials < 1) throw ConfigError("n_trials must be >= 1");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    // Block diagonalization needs room next to the other users' channels.
    if ((cfg.system.n_users - 1) * cfg.system.n_rx + cfg.system.n_streams > cfg.system.n_tx)
        throw ConfigError("system: (n_users - 1) * n_rx + n_streams exceeds n_tx; the interference-free "
                          "target precoder does not exist");
}

std::string to_config_text(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "system.n_tx = " << c.system.n_tx << "\n"
      << "system.n_rx = " << c.system.n_rx << "\n"
      << "system.n_users = " << c.system.n_users << "\n"
      << "system.n_streams = " << c.system.n_streams << "\n"
      << "system.n_rf_tx = " << c.system.n_rf_tx << "\n"
      << "system.n_carriers = " << c.system.n_carriers << "\n"
      << "system.f_c = " << fmt_double(c.system.f_c) << "\n"
      << "system.bandwidth = " << fmt_double(c.system.bandwidth) << "\n"
      << "system.rho_u = " << fmt_double(c.system.rho_u) << "\n"
      << "channel.mode = " << (c.channel.mode == ChannelMode::Clustered ? "clustered" : "uncorrelated") << "\n"
      << "channel.n_clusters = " << c.channel.n_clusters << "\n"
      << "channel.n_rays = " << c.channel.n_rays << "\n"
      << "channel.angular_spread_deg = " << fmt_double(c.channel.angular_spread_deg) << "\n"
      << "channel.los_enabled = " << (c.channel.los_enabled ? "true" : "false") << "\n"
      << "channel.los_power_ratio = " << fmt_double(c.channel.los_power_ratio) << "\n"
      << "channel.delay_spread = " << fmt_double(c.channel.delay_spread) << "\n"
      << "channel.beam_split = " << (c.channel.beam_split_enabled ? "true" : "false") << "\n"
      << "admm.rho = " << fmt_double(c.admm.rho) << "\n"
      << "admm.eta = " << fmt_double(c.admm.eta) << "\n"
      << "admm.mu = " << fmt_double(c.admm.mu) << "\n"
      << "admm.max_iters = " << c.admm.max_iters << "\n"
      << "admm.ridge = " << fmt_double(c.admm.ridge) << "\n"
      << "architectures = ";
    for (std::size_t i = 0; i < c.architectures.size(); ++i)
        o << (i ? ", " : "") << architecture_label(c.architectures[i]);
    o << "\nsnr_grid_db = ";
    for (std::size_t i = 0; i < c.snr_grid_db.size(); ++i) o << (i ? ", " : "") << fmt_double(c.snr_grid_db[i]);
    o << "\nn_trials = " << c.n_trials << "\n"
      << "master_seed = " << c.master_seed << "\n"
      << "baselines.fully_digital = " << (c.fully_digital ? "true" : "false") << "\n"
      << "baselines.admm_mu0 = " << (c.admm_mu0 ? "true" : "false") << "\n"
      << "output_path = " << c.output_path << "\n"
      << "threads = " << c.threads << "\n";
    return o.str();
}

}  // namespace hp
